"""Integer Laurent polynomials in one variable t.

Values are exact (python ints).  Polynomial invariants are defined up to a
unit +-t^k, so `normalized` picks a canonical representative: exponents are
shifted so the support is centred at zero (lowest exponent = -(span//2) for
even span, -((span+1)//2) for odd span) and the leading coefficient is made
positive.  Printing follows the `t^-1 - 1 + t` style, ascending exponents.
"""

from __future__ import annotations


class LaurentPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        # coeffs: mapping exponent -> integer coefficient; zeros dropped
        self.coeffs = {}
        if coeffs:
            for e, c in dict(coeffs).items():
                if c != 0:
                    self.coeffs[int(e)] = int(c)

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def t(cls, exponent: int = 1, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def lo(self) -> int:
        return min(self.coeffs)

    def hi(self) -> int:
        return max(self.coeffs)

    def span(self) -> int:
        return 0 if not self.coeffs else self.hi() - self.lo()

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self.coeffs.items()})
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by t^k."""
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()})

    def reciprocal(self) -> "LaurentPoly":
        """Substitute t -> 1/t."""
        return LaurentPoly({-e: c for e, c in self.coeffs.items()})

    def content(self) -> int:
        from math import gcd
        g = 0
        for c in self.coeffs.values():
            g = gcd(g, abs(c))
        return g

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division; raises ArithmeticError when a remainder is left."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly()
        # reduce to ordinary polynomial division on shifted copies
        a = self.shift(-self.lo())
        b = other.shift(-other.lo())
        da, db = a.hi(), b.hi()
        acoef = [a.coeffs.get(i, 0) for i in range(da + 1)]
        bcoef = [b.coeffs.get(i, 0) for i in range(db + 1)]
        lead = bcoef[-1]
        q = [0] * (da - db + 1) if da >= db else []
        for i in range(da - db, -1, -1):
            top = acoef[i + db]
            if top % lead != 0:
                raise ArithmeticError("inexact polynomial division")
            f = top // lead
            q[i] = f
            if f:
                for j in range(db + 1):
                    acoef[i + j] -= f * bcoef[j]
        if any(acoef):
            raise ArithmeticError("inexact polynomial division")
        quot = LaurentPoly({i: c for i, c in enumerate(q)})
        return quot.shift(self.lo() - other.lo())

    def normalized(self) -> "LaurentPoly":
        """Canonical representative of the +-t^k equivalence class."""
        if not self.coeffs:
            return LaurentPoly()
        span = self.span()
        target_lo = -(span // 2) if span % 2 == 0 else -((span + 1) // 2)
        p = self.shift(target_lo - self.lo())
        if p.coeffs[p.hi()] < 0:
            p = -p
        return p

    def equal_up_to_units(self, other: "LaurentPoly") -> bool:
        return self.normalized() == other.normalized()

    def eval_int(self, x: int) -> tuple[int, int]:
        """Evaluate t^(-lo)*self at integer x; returns (value, -lo shift)."""
        if not self.coeffs:
            return 0, 0
        lo = self.lo()
        val = 0
        for e in range(self.hi(), lo - 1, -1):
            val = val * x + self.coeffs.get(e, 0)
        return val, -lo

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            mag = abs(c)
            if e == 0:
                term = str(mag)
            else:
                var = "t" if e == 1 else f"t^{e}"
                term = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(("+ " if c > 0 else "- ") + term)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.coeffs!r})"
