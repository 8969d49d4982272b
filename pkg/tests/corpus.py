"""Small consistent presentations shared by the oracle tests (all |G| <= 2^12)."""

import itertools
from functools import lru_cache

from engelkit.formats import parse_fp
from engelkit.nq import nilpotent_quotient


def _burnside_3_3():
    # exponent 3 imposed on every a^i b^j c^k; this already gives B(3,3)
    rels = []
    for i, j, k in itertools.product(range(3), repeat=3):
        w = " ".join(f"{g}^{e}" for g, e in zip("abc", (i, j, k)) if e)
        if w:
            rels.append(f"rel ({w})^3")
    return "%p 3\ngens a b c\n" + "\n".join(rels) + "\n"


def _engel3_2group(ea, eb):
    # 3-Engel instances [y,x,x,x] for y in {a,b} and x = a^i b^j with small i, j
    rels = [f"rel a^{2 ** ea}", f"rel b^{2 ** eb}"]
    for i, j in itertools.product(range(min(4, 2 ** ea)), range(min(4, 2 ** eb))):
        if i or j:
            x = " ".join(f"{g}^{e}" for g, e in zip("ab", (i, j)) if e)
            rels += [f"rel [{y},({x}),({x}),({x})]" for y in "ab"]
    return "%p 2\ngens a b\n" + "\n".join(rels) + "\n"


# (label, .fp text, class bound, expected order)
SMALL = [
    ("C9", "%p 3\ngens x\nrel x^9\n", 2, 9),
    ("C2^3", "%p 2\ngens a b c\nrel a^2\nrel b^2\nrel c^2\nrel [a,b]\nrel [a,c]\nrel [b,c]\n", 2, 8),
    ("C4xC4xC2", "%p 2\ngens a b c\nrel a^4\nrel b^4\nrel c^2\nrel [a,b]\nrel [a,c]\nrel [b,c]\n",
     2, 32),
    ("D8", "%p 2\ngens a b\nrel a^4\nrel b^2\nrel [a,b] = a^2\n", 4, 8),
    ("Q8", "%p 2\ngens a b\nrel a^4\nrel b^2 = a^2\nrel [a,b] = a^2\n", 4, 8),
    ("D16", "%p 2\ngens a b\nrel a^2\nrel b^2\nrel [a,b]^4\n", 5, 16),
    ("D32", "%p 2\ngens a b\nrel a^2\nrel b^2\n", 4, 32),
    ("D64", "%p 2\ngens a b\nrel a^2\nrel b^2\n", 5, 64),
    ("C4*C2 class 3", "%p 2\ngens a b\nrel a^4\nrel b^2\n", 3, 64),
    ("C4*C2 class 4", "%p 2\ngens a b\nrel a^4\nrel b^2\n", 4, 256),
    ("C4*C4 [a,b]^2 class 3", "%p 2\ngens a b\nrel a^4\nrel b^4\nrel [a,b]^2\n", 3, 128),
    ("C4*C4 [a,b]^2 class 4", "%p 2\ngens a b\nrel a^4\nrel b^4\nrel [a,b]^2\n", 4, 1024),
    ("C2xDinf class 2", "%p 2\ngens a b c\nrel a^2\nrel b^2\nrel c^2\nrel [a,b]\nrel [a,c]\n",
     2, 16),
    ("extraspecial 27 exp 3",
     "%p 3\ngens x y\nrel x^3\nrel y^3\nrel [x,y,x]\nrel [x,y,y]\nrel [x,y]^3\n", 2, 27),
    ("extraspecial 27 exp 9", "%p 3\ngens x y\nrel x^9\nrel y^3\nrel [x,y] = x^3\n", 3, 27),
    ("C3*C3 class 3", "%p 3\ngens a b\nrel a^3\nrel b^3\n", 3, 243),
    ("C3*C3 class 4", "%p 3\ngens a b\nrel a^3\nrel b^3\n", 4, 2187),
    ("C9*C3 [a,b]^3", "%p 3\ngens a b\nrel a^9\nrel b^3\nrel [a,b]^3\n", 2, 81),
    ("C9*C3 [a,b]^3 class 3", "%p 3\ngens a b\nrel a^9\nrel b^3\nrel [a,b]^3\n", 3, 729),
    ("C3*C3*C3 class 2", "%p 3\ngens a b c\nrel a^3\nrel b^3\nrel c^3\n", 2, 729),
    ("cyclic 3,2", "%p 3\ngens a b\nrel [a,b] = a^p\npow a^(p^2) = 1\npow b^p = 1\n", 3, 27),
    ("cyclic 3,3", "%p 3\ngens a b\nrel [a,b] = a^p\npow a^(p^3) = 1\npow b^(p^2) = 1\n", 4, 243),
    ("cyclic 4,2", "%p 2\ngens a b\nrel [a,b] = a^4\npow a^16 = 1\npow b^4 = 1\n", 3, 64),
    ("cyclic 5,2", "%p 5\ngens a b\nrel [a,b] = a^p\npow a^(p^2) = 1\npow b^p = 1\n", 3, 125),
    ("C5*C5 class 2", "%p 5\ngens a b\nrel a^5\nrel b^5\n", 2, 125),
    ("C5*C5 class 3", "%p 5\ngens a b\nrel a^5\nrel b^5\n", 3, 3125),
    ("C7*C7 class 2", "%p 7\ngens a b\nrel a^7\nrel b^7\n", 2, 343),
    ("B(3,3)", _burnside_3_3(), 4, 2187),
    ("3-Engel 2^8 class 4", _engel3_2group(3, 1), 6, 256),
    ("3-Engel 2^10 class 4", _engel3_2group(2, 2), 6, 1024),
]


@lru_cache(maxsize=None)
def build(label):
    for name, text, c, order in SMALL:
        if name == label:
            return nilpotent_quotient(parse_fp(text), c).presentation
    raise KeyError(label)


def labels(max_order=1 << 12):
    return [name for name, _, _, order in SMALL if order <= max_order]


def expected_order(label):
    return next(o for name, _, _, o in SMALL if name == label)
