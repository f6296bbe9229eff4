"""Coefficient fields: exact rationals and prime fields GF(p).

Elements are plain Python objects supporting ``+ - * /`` and comparison with
``0``; the Groebner and linear-algebra kernels rely on nothing else.
"""

from __future__ import annotations

from fractions import Fraction

try:  # gmpy2 rationals are several times faster than Fraction
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover
    _mpq = Fraction


class _FpBase:
    __slots__ = ("v",)
    p = 2

    def __init__(self, v):
        self.v = int(v) % self.p

    def _coerce(self, o):
        if isinstance(o, _FpBase):
            return o.v
        if isinstance(o, int):
            return o % self.p
        raise TypeError(f"cannot mix GF({self.p}) with {type(o).__name__}")

    def __add__(self, o):
        return self.__class__(self.v + self._coerce(o))

    __radd__ = __add__

    def __sub__(self, o):
        return self.__class__(self.v - self._coerce(o))

    def __rsub__(self, o):
        return self.__class__(self._coerce(o) - self.v)

    def __mul__(self, o):
        return self.__class__(self.v * self._coerce(o))

    __rmul__ = __mul__

    def __neg__(self):
        return self.__class__(-self.v)

    def __truediv__(self, o):
        d = self._coerce(o)
        if d == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return self.__class__(self.v * pow(d, self.p - 2, self.p))

    def __rtruediv__(self, o):
        return self.__class__(self._coerce(o)) / self

    def __pow__(self, k):
        if k < 0:
            return self.__class__(1) / self.__class__(pow(self.v, -k, self.p))
        return self.__class__(pow(self.v, k, self.p))

    def __eq__(self, o):
        try:
            return self.v == self._coerce(o)
        except TypeError:
            return NotImplemented

    def __ne__(self, o):
        r = self.__eq__(o)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return str(self.v)


_FP_CLASSES: dict[int, type] = {}


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """A coefficient field identified by its characteristic (0 means QQ)."""

    def __init__(self, characteristic: int = 0):
        if characteristic and not _is_prime(characteristic):
            raise ValueError(f"characteristic {characteristic} is not prime")
        if characteristic >= 2**31:
            raise ValueError("prime characteristic must be below 2^31")
        self.characteristic = characteristic
        if characteristic:
            cls = _FP_CLASSES.get(characteristic)
            if cls is None:
                cls = type(f"GF{characteristic}", (_FpBase,), {"p": characteristic, "__slots__": ()})
                _FP_CLASSES[characteristic] = cls
            self._cls = cls
        else:
            self._cls = None
        self.zero = self(0)
        self.one = self(1)

    def __call__(self, x):
        if self._cls is not None:
            if isinstance(x, _FpBase):
                return self._cls(x.v)
            if isinstance(x, Fraction):
                return self._cls(x.numerator) / self._cls(x.denominator)
            if isinstance(x, str):
                return self(Fraction(x))
            return self._cls(int(x))
        if isinstance(x, str):
            return _mpq(Fraction(x))
        return _mpq(x)

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    def to_str(self, c) -> str:
        if self.characteristic:
            return str(c.v)
        c = Fraction(int(c.numerator), int(c.denominator))
        return str(c)

    def to_json(self, c):
        return self.to_str(c)


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)
