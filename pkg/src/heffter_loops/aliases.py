#
# For licensing see accompanying LICENSE file.
#
# a row or column index in Z_m
Index = int
Cell = tuple[Index, Index]
# (row, col, symbol)
ArrayEntry = tuple[Index, Index, int]
# canonical fully parenthesised polynomial text, e.g. "((1+2)+3)"
PolynomialText = str
FixtureName = str
