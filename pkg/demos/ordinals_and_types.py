"""Ordinal arithmetic and order-type classification at a glance."""

from ordpart.ordertype import classify_typewise, embeds, format_term, normalize, parse_term
from ordpart.ordinal import add, decompose_into_indecomposables, format_ordinal, mul, parse_ordinal

a, b = parse_ordinal("w + 1"), parse_ordinal("w")
print("(w+1) + w =", format_ordinal(add(a, b)))
# mul(a, b) is b copies of a
print("2 copies of (w+1) =", format_ordinal(mul(a, 2)))
print("w copies of 2 =", format_ordinal(mul(2, parse_ordinal("w"))))
print("w^2*2 + w + 3 splits into",
      [format_ordinal(p) for p in decompose_into_indecomposables(parse_ordinal("w^2*2 + w + 3"))])

for text in ["eta + 1", "2 . w", "w* + 3", "w + w*", "3"]:
    t = parse_term(text)
    print(f"{text:>8} -> {format_term(normalize(t)):>8}  {classify_typewise(t).value}")

print("w + w* embeds into w* + w:", embeds(parse_term("w + w*"), parse_term("w* + w")).value)
