"""Sparse multivariate Laurent polynomials and rational functions over ZZ.

All symbolic state in this package (cluster variables, coefficient
semifield values, invariant polynomials) is carried by the two value types
defined here, over a shared ordered variable table. A polynomial is a
dictionary from exponent tuples to nonzero integer coefficients; a
rational function is a pair of polynomials normalized only by integer
content, monomial content and denominator sign. Equality of fractions is
decided by cross-multiplication, never by canonical form, so no
multivariate GCD is needed anywhere.

The module also provides the block-symmetry test for the splitting
variables, the rewriting of a block-symmetric polynomial into elementary
symmetric symbols, and the substitution map that eliminates the splitting
variables in favor of exchange-polynomial coefficients.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from math import gcd


class TableMismatchError(ValueError):
    pass


class NotBlockSymmetricError(ValueError):
    pass


class PsiDomainError(ValueError):
    pass


class PsiConeError(PsiDomainError):
    """Rewritten coefficients left the nonnegative cone."""


class PsiKernelError(ValueError):
    pass


class TermLimitError(RuntimeError):
    """An expansion exceeded the caller's term budget."""


class VariableTable:
    """Ordered list of distinct variable names.

    Tables are compared by identity: values from different tables never
    mix, and every operation checks for that explicitly.
    """

    __slots__ = ("names", "_index")

    def __init__(self, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        for name in names:
            if not name or not isinstance(name, str):
                raise ValueError("variable names must be nonempty strings")
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def __repr__(self):
        return f"VariableTable({list(self.names)!r})"


def _check_table(a, b):
    if a.table is not b.table:
        raise TableMismatchError("values belong to different variable tables")


class LaurentPolynomial:
    """Finite map from integer exponent tuples to nonzero integer coefficients."""

    __slots__ = ("table", "terms")

    def __init__(self, table: VariableTable, terms: dict):
        self.table = table
        self.terms = terms

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, table):
        return cls(table, {})

    @classmethod
    def constant(cls, table, value: int):
        if value == 0:
            return cls(table, {})
        return cls(table, {(0,) * len(table): int(value)})

    @classmethod
    def one(cls, table):
        return cls.constant(table, 1)

    @classmethod
    def monomial(cls, table, powers: dict, coeff: int = 1):
        """Monomial from a name-or-index -> exponent mapping."""
        if coeff == 0:
            return cls(table, {})
        exps = [0] * len(table)
        for key, e in powers.items():
            idx = key if isinstance(key, int) else table.index(key)
            exps[idx] += int(e)
        return cls(table, {tuple(exps): int(coeff)})

    @classmethod
    def variable(cls, table, name: str, power: int = 1):
        return cls.monomial(table, {name: power})

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {(0,) * len(self.table): 1}

    def is_monomial(self):
        return len(self.terms) == 1

    def is_constant(self):
        return not self.terms or self.terms.keys() == {(0,) * len(self.table)}

    def constant_value(self) -> int:
        if self.is_zero():
            return 0
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def support_vars(self):
        """Indices of variables appearing with a nonzero exponent."""
        used = set()
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used.add(i)
        return used

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.table is other.table and self.terms == other.terms

    __hash__ = None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        _check_table(self, other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            v = out.get(exps, 0) + c
            if v:
                out[exps] = v
            else:
                out.pop(exps, None)
        return LaurentPolynomial(self.table, out)

    def __sub__(self, other):
        _check_table(self, other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            v = out.get(exps, 0) - c
            if v:
                out[exps] = v
            else:
                out.pop(exps, None)
        return LaurentPolynomial(self.table, out)

    def __neg__(self):
        return LaurentPolynomial(self.table, {e: -c for e, c in self.terms.items()})

    def scale(self, k: int):
        if k == 0:
            return LaurentPolynomial.zero(self.table)
        if k == 1:
            return self
        return LaurentPolynomial(self.table, {e: c * k for e, c in self.terms.items()})

    def __mul__(self, other):
        _check_table(self, other)
        a, b = self.terms, other.terms
        if not a or not b:
            return LaurentPolynomial(self.table, {})
        if len(a) > len(b):
            a, b = b, a
        if len(a) * len(b) >= 16384:
            return LaurentPolynomial(self.table, _mul_packed(a, b, len(self.table)))
        out: dict = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                v = get(key, 0) + ca * cb
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return LaurentPolynomial(self.table, out)

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial polynomial")
            (exps, c), = self.terms.items()
            if c not in (1, -1):
                raise ValueError("negative power needs a unit coefficient")
            return LaurentPolynomial(
                self.table, {tuple(k * e for e in exps): c if k % 2 else 1}
            )
        result = LaurentPolynomial.one(self.table)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- content and shifts ------------------------------------------------

    def int_content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
            if g == 1:
                break
        return g

    def monomial_content(self):
        """Componentwise minimum exponent vector over all terms."""
        if not self.terms:
            raise ValueError("zero polynomial has no monomial content")
        it = iter(self.terms)
        mins = list(next(it))
        for exps in it:
            for i, e in enumerate(exps):
                if e < mins[i]:
                    mins[i] = e
        return tuple(mins)

    def shift(self, exps):
        """Multiply by the monomial with the given exponent vector."""
        if all(e == 0 for e in exps):
            return self
        return LaurentPolynomial(
            self.table,
            {tuple(a + b for a, b in zip(key, exps)): c for key, c in self.terms.items()},
        )

    def divide_int(self, k: int):
        out = {}
        for e, c in self.terms.items():
            q, rem = divmod(c, k)
            if rem:
                raise ValueError("integer content division is not exact")
            out[e] = q
        return LaurentPolynomial(self.table, out)

    def lead_key(self):
        return max(self.terms)

    def lead_coeff(self) -> int:
        return self.terms[max(self.terms)]

    # -- division ----------------------------------------------------------

    def exact_div(self, divisor: "LaurentPolynomial"):
        """Exact quotient self / divisor, or None if the division fails.

        Single-divisor elimination against the divisor's lexicographically
        smallest term, with a lazy heap tracking the working minimum. The
        term cap stops the non-terminating descent a genuinely inexact
        Laurent division would produce; for nonnegative quotient and
        divisor the quotient has at most as many terms as the dividend, so
        the cap never fires on valid inputs.
        """
        _check_table(self, divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPolynomial.zero(self.table)
        dmin = min(divisor.terms)
        dcoeff = divisor.terms[dmin]
        rest = [(e, c) for e, c in divisor.terms.items() if e != dmin]
        work = dict(self.terms)
        heap = list(work.keys())
        heapq.heapify(heap)
        out: dict = {}
        cap = len(work) + 1000
        while work:
            while heap and heap[0] not in work:
                heapq.heappop(heap)
            if not heap:
                return None
            lead = heapq.heappop(heap)
            q, rem = divmod(work[lead], dcoeff)
            if rem:
                return None
            mono = tuple(a - b for a, b in zip(lead, dmin))
            out[mono] = q
            if len(out) > cap:
                return None
            del work[lead]
            for e, c in rest:
                key = tuple(a + b for a, b in zip(mono, e))
                old = work.get(key)
                v = (old or 0) - q * c
                if v:
                    work[key] = v
                    if old is None:
                        heapq.heappush(heap, key)
                else:
                    work.pop(key, None)
        return LaurentPolynomial(self.table, out)

    # -- substitution ------------------------------------------------------

    def substitute_monomials(self, mapping: dict):
        """Replace variables by monomials of the same table.

        `mapping` sends variable indices to exponent vectors; every
        occurrence x_i^e becomes (monomial)^e. Unmapped variables stay.
        """
        if not mapping:
            return self
        width = len(self.table)
        out: dict = {}
        for exps, c in self.terms.items():
            new = list(exps)
            add = None
            for idx, target in mapping.items():
                e = new[idx]
                if e:
                    new[idx] = 0
                    if add is None:
                        add = [0] * width
                    for i, t in enumerate(target):
                        if t:
                            add[i] += e * t
            if add is not None:
                new = [a + b for a, b in zip(new, add)]
            key = tuple(new)
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return LaurentPolynomial(self.table, out)

    def transplant(self, target: VariableTable, name_map=None):
        """Re-express this polynomial on another table.

        Variables are matched by name (or through `name_map`), and must all
        exist in the target table.
        """
        src_names = self.table.names
        idx_map = {}
        for i in range(len(src_names)):
            name = src_names[i]
            if name_map and name in name_map:
                name = name_map[name]
            idx_map[i] = target.index(name)
        width = len(target)
        out = {}
        for exps, c in self.terms.items():
            new = [0] * width
            for i, e in enumerate(exps):
                if e:
                    new[idx_map[i]] += e
            out[tuple(new)] = c
        if len(out) != len(self.terms):
            raise ValueError("transplant collapsed distinct monomials")
        return LaurentPolynomial(target, out)

    def evaluate(self, assign: dict) -> "RationalFunction":
        """Substitute rational functions for variables.

        `assign` maps variable indices to RationalFunction values on the
        same table. Falls back to a fast exponent remap when every value is
        a plain monomial with unit coefficients.
        """
        if all(_as_unit_monomial(v) is not None for v in assign.values()):
            mapping = {i: _as_unit_monomial(v) for i, v in assign.items()}
            return RationalFunction.from_poly(self.substitute_monomials(mapping))
        total = RationalFunction.zero(self.table)
        for exps, c in self.terms.items():
            rest = [0] * len(self.table)
            value = RationalFunction.constant(self.table, c)
            for i, e in enumerate(exps):
                if not e:
                    continue
                if i in assign:
                    value = value * assign[i] ** e
                else:
                    rest[i] = e
            if any(rest):
                value = value * RationalFunction.from_poly(
                    LaurentPolynomial(self.table, {tuple(rest): 1})
                )
            total = total + value
        return total

    # -- rendering ---------------------------------------------------------

    def render(self) -> str:
        return render_poly(self)

    def __repr__(self):
        return f"<poly {self.render()}>"


def _mul_packed(a: dict, b: dict, width: int) -> dict:
    """Large product via single-integer exponent keys.

    Exponents are shifted to per-operand minima and packed into disjoint
    bit fields sized to the exact result span, so key addition is one
    integer add with no carries between fields.
    """
    def bounds(terms):
        it = iter(terms)
        first = next(it)
        lo = list(first)
        hi = list(first)
        for key in it:
            for i, e in enumerate(key):
                if e < lo[i]:
                    lo[i] = e
                elif e > hi[i]:
                    hi[i] = e
        return lo, hi

    lo_a, hi_a = bounds(a)
    lo_b, hi_b = bounds(b)
    bits = [
        ((hi_a[i] - lo_a[i]) + (hi_b[i] - lo_b[i]) + 1).bit_length()
        for i in range(width)
    ]
    shifts = [0] * width
    acc = 0
    for i in range(width - 1, -1, -1):
        shifts[i] = acc
        acc += bits[i]

    def pack(terms, lo):
        packed = []
        for key, c in terms.items():
            v = 0
            for i in range(width):
                e = key[i] - lo[i]
                if e:
                    v += e << shifts[i]
            packed.append((v, c))
        return packed

    pa = pack(a, lo_a)
    pb = pack(b, lo_b)
    out: dict = {}
    get = out.get
    for ka, ca in pa:
        for kb, cb in pb:
            key = ka + kb
            v = get(key, 0) + ca * cb
            if v:
                out[key] = v
            else:
                del out[key]
    masks = [(1 << bits[i]) - 1 for i in range(width)]
    lo = [lo_a[i] + lo_b[i] for i in range(width)]
    result = {}
    for key, c in out.items():
        exps = tuple(
            ((key >> shifts[i]) & masks[i]) + lo[i] for i in range(width)
        )
        result[exps] = c
    return result


def _as_unit_monomial(f: "RationalFunction"):
    """Exponent vector if f is a single monomial with coefficient 1, else None."""
    if len(f.num.terms) != 1 or len(f.den.terms) != 1:
        return None
    (en, cn), = f.num.terms.items()
    (ed, cd), = f.den.terms.items()
    if cn != 1 or cd != 1:
        return None
    return tuple(a - b for a, b in zip(en, ed))


def render_poly(p: LaurentPolynomial) -> str:
    """Canonical text form: terms ascending by total degree, then exponents."""
    if not p.terms:
        return "0"
    names = p.table.names
    parts = []
    for exps in sorted(p.terms, key=lambda e: (sum(e), tuple(-v for v in e))):
        c = p.terms[exps]
        factors = []
        for i, e in enumerate(exps):
            if e == 0:
                continue
            factors.append(names[i] if e == 1 else f"{names[i]}^{e}")
        mono = "*".join(factors)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


class RationalFunction:
    """Quotient of two Laurent polynomials over the same table.

    Normalization keeps the denominator free of monomial content, makes
    its leading coefficient positive, and cancels the common integer
    content of the two parts. Nothing stronger is attempted; `__eq__`
    cross-multiplies.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPolynomial, den: LaurentPolynomial, _raw=False):
        _check_table(num, den)
        if _raw:
            self.num = num
            self.den = den
            return
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num = num
            self.den = LaurentPolynomial.one(num.table)
            return
        if num.terms == den.terms:
            self.num = LaurentPolynomial.one(num.table)
            self.den = LaurentPolynomial.one(num.table)
            return
        mden = den.monomial_content()
        if any(mden):
            neg = tuple(-e for e in mden)
            num = num.shift(neg)
            den = den.shift(neg)
        g = gcd(num.int_content(), den.int_content())
        if den.lead_coeff() < 0:
            g = -g
        if g != 1:
            num = num.divide_int(g)
            den = den.divide_int(g)
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_poly(cls, p: LaurentPolynomial):
        return cls(p, LaurentPolynomial.one(p.table), _raw=True)

    @classmethod
    def zero(cls, table):
        return cls.from_poly(LaurentPolynomial.zero(table))

    @classmethod
    def one(cls, table):
        return cls.from_poly(LaurentPolynomial.one(table))

    @classmethod
    def constant(cls, table, v: int):
        return cls.from_poly(LaurentPolynomial.constant(table, v))

    @classmethod
    def variable(cls, table, name, power=1):
        return cls.from_poly(LaurentPolynomial.variable(table, name, power))

    @classmethod
    def monomial(cls, table, powers, coeff=1):
        return cls.from_poly(LaurentPolynomial.monomial(table, powers, coeff))

    @property
    def table(self):
        return self.num.table

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.terms == self.den.terms

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FactoredFraction):
            other = other.expand()
        if not isinstance(other, RationalFunction):
            return NotImplemented
        _check_table(self, other)
        if self.num.terms == other.num.terms and self.den.terms == other.den.terms:
            return True
        return (self.num * other.den).terms == (other.num * self.den).terms

    __hash__ = None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        _check_table(self, other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den.terms == other.den.terms:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _raw=True)

    def __mul__(self, other):
        _check_table(self, other)
        a_num, a_den = self.num, self.den
        b_num, b_den = other.num, other.den
        # cancel identical cross factors; this is what keeps mutation
        # formulas from accumulating repeated blocks of spent denominators
        if a_num.terms == b_den.terms and a_num.terms:
            a_num = LaurentPolynomial.one(a_num.table)
            b_den = LaurentPolynomial.one(a_num.table)
        if b_num.terms == a_den.terms and b_num.terms:
            b_num = LaurentPolynomial.one(a_num.table)
            a_den = LaurentPolynomial.one(a_num.table)
        return RationalFunction(a_num * b_num, a_den * b_den)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = RationalFunction.one(self.table)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def render(self) -> str:
        if self.den.is_one():
            return self.num.render()
        num = self.num.render()
        den = self.den.render()
        if len(self.num.terms) > 1:
            num = f"({num})"
        if len(self.den.terms) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"<ratfn {self.render()}>"


def ratfn_eq(f: RationalFunction, g: RationalFunction) -> bool:
    """Exact equality of fractions by cross-multiplication."""
    return f == g


class FactoredFraction:
    """Nonzero fraction kept as a product of polynomial factors with exponents.

    Multiplicative operations merge factor exponents, so a factor
    introduced by one mutation cancels symbolically when a later mutation
    divides by it again; nothing is multiplied out until a caller asks for
    the expanded fraction. Factors are keyed by their term dictionaries, so
    equal polynomials always share one slot no matter how they were built.
    """

    __slots__ = ("table", "factors")

    def __init__(self, table, factors):
        self.table = table
        self.factors = factors

    @staticmethod
    def _key(p: LaurentPolynomial):
        return frozenset(p.terms.items())

    @classmethod
    def one(cls, table):
        return cls(table, {})

    @classmethod
    def from_poly(cls, p: LaurentPolynomial, exp: int = 1):
        if p.is_zero():
            raise ZeroDivisionError("factored fractions are nonzero")
        if exp == 0 or p.is_one():
            return cls(p.table, {})
        return cls(p.table, {cls._key(p): (p, exp)})

    @classmethod
    def from_ratfn(cls, f: "RationalFunction"):
        out = cls.from_poly(f.num)
        if not f.den.is_one():
            out = out * cls.from_poly(f.den, -1)
        return out

    @classmethod
    def variable(cls, table, name, power=1):
        return cls.from_poly(LaurentPolynomial.variable(table, name, power))

    def is_one(self):
        return not self.factors

    def __mul__(self, other: "FactoredFraction"):
        if self.table is not other.table:
            raise TableMismatchError("values belong to different variable tables")
        if not other.factors:
            return self
        if not self.factors:
            return other
        out = dict(self.factors)
        for key, (p, e) in other.factors.items():
            if key in out:
                merged = out[key][1] + e
                if merged:
                    out[key] = (p, merged)
                else:
                    del out[key]
            else:
                out[key] = (p, e)
        return FactoredFraction(self.table, out)

    def __pow__(self, k: int):
        if k == 0:
            return FactoredFraction(self.table, {})
        return FactoredFraction(
            self.table, {key: (p, e * k) for key, (p, e) in self.factors.items()}
        )

    def inverse(self):
        return self ** -1

    def __truediv__(self, other):
        return self * other.inverse()

    def positive_part(self) -> "FactoredFraction":
        return FactoredFraction(
            self.table, {k: v for k, v in self.factors.items() if v[1] > 0}
        )

    def negative_part(self) -> "FactoredFraction":
        """Denominator factors, with positive exponents."""
        return FactoredFraction(
            self.table,
            {k: (p, -e) for k, (p, e) in self.factors.items() if e < 0},
        )

    def expand_product(self) -> LaurentPolynomial:
        """Multiply out, requiring all exponents nonnegative."""
        out = LaurentPolynomial.one(self.table)
        for p, e in self.factors.values():
            if e < 0:
                raise ValueError("negative exponent in a product expansion")
            out = out * p ** e
        return out

    def expand_parts(self, term_limit=None):
        num = LaurentPolynomial.one(self.table)
        den = LaurentPolynomial.one(self.table)
        for p, e in self.factors.values():
            for _ in range(abs(e)):
                if e > 0:
                    num = num * p
                    if term_limit is not None and len(num.terms) > term_limit:
                        raise TermLimitError(f"expansion exceeds {term_limit} terms")
                else:
                    den = den * p
                    if term_limit is not None and len(den.terms) > term_limit:
                        raise TermLimitError(f"expansion exceeds {term_limit} terms")
        return num, den

    def expand(self, term_limit=None) -> "RationalFunction":
        num, den = self.expand_parts(term_limit)
        return RationalFunction(num, den)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return ff_eq(self, FactoredFraction.from_ratfn(other))
        if not isinstance(other, FactoredFraction):
            return NotImplemented
        if self.factors == other.factors:
            return True
        return ff_eq(self, other)

    __hash__ = None

    def render(self) -> str:
        return self.expand().render()

    def __repr__(self):
        return f"<ff {len(self.factors)} factors>"


def ff_eq(a: FactoredFraction, b: FactoredFraction, term_limit=None) -> bool:
    """Exact equality of factored fractions with factor-level cancellation.

    The quotient's factors are first stripped of integer and monomial
    content so that equal polynomials cancel even when built differently;
    only the remaining residual is multiplied out and cross-compared.
    `term_limit` bounds the residual expansion.
    """
    from fractions import Fraction

    q = a * b.inverse()
    if not q.factors:
        return True
    table = q.table
    width = len(table)
    coeff = Fraction(1)
    mono = [0] * width
    canon: dict = {}
    for p, e in q.factors.values():
        mc = p.monomial_content()
        if any(mc):
            p = p.shift(tuple(-v for v in mc))
            for i, v in enumerate(mc):
                mono[i] += e * v
        ic = p.int_content()
        if p.lead_coeff() < 0:
            ic = -ic
        if ic != 1:
            p = p.divide_int(ic)
            coeff *= Fraction(ic) ** e
        if p.is_one():
            continue
        key = FactoredFraction._key(p)
        if key in canon:
            merged = canon[key][1] + e
            if merged:
                canon[key] = (p, merged)
            else:
                del canon[key]
        else:
            canon[key] = (p, e)
    num = LaurentPolynomial.monomial(
        table,
        {i: v for i, v in enumerate(mono) if v > 0},
        coeff.numerator,
    )
    den = LaurentPolynomial.monomial(
        table,
        {i: -v for i, v in enumerate(mono) if v < 0},
        coeff.denominator,
    )
    for p, e in canon.values():
        for _ in range(abs(e)):
            if e > 0:
                num = num * p
            else:
                den = den * p
            if term_limit is not None and max(len(num), len(den)) > term_limit:
                raise TermLimitError(f"equality residual exceeds {term_limit} terms")
    return num.terms == den.terms


def ff_add(a: FactoredFraction, b: FactoredFraction) -> FactoredFraction:
    """Sum of two factored fractions over the factor-wise common denominator."""
    if a.table is not b.table:
        raise TableMismatchError("values belong to different variable tables")
    da = a.negative_part()
    db = b.negative_part()
    common = dict(da.factors)
    for key, (p, e) in db.factors.items():
        if key in common:
            common[key] = (p, max(common[key][1], e))
        else:
            common[key] = (p, e)
    common_ff = FactoredFraction(a.table, common)
    na = (a * common_ff).expand_product()
    nb = (b * common_ff).expand_product()
    return FactoredFraction.from_poly(na + nb) * common_ff.inverse()


def ratfn_product(factors) -> RationalFunction:
    out = None
    for f in factors:
        out = f if out is None else out * f
    if out is None:
        raise ValueError("empty product needs a table")
    return out


# -- block symmetry and elementary symmetric rewriting ----------------------


def _swap_key(key, i, j):
    lst = list(key)
    lst[i], lst[j] = lst[j], lst[i]
    return tuple(lst)


def block_symmetric(p: LaurentPolynomial, block) -> bool:
    """True iff p is invariant under every transposition inside the block.

    `block` is a sequence of variable indices; adjacent transpositions
    generate the full symmetric group on the block.
    """
    block = list(block)
    for a in range(len(block) - 1):
        i, j = block[a], block[a + 1]
        swapped = {_swap_key(key, i, j): c for key, c in p.terms.items()}
        if swapped != p.terms:
            return False
    return True


def elementary_symmetric(table, block, degree: int) -> LaurentPolynomial:
    """Expanded elementary symmetric polynomial of the block variables."""
    out = {}
    width = len(table)
    for combo in itertools.combinations(block, degree):
        exps = [0] * width
        for idx in combo:
            exps[idx] = 1
        out[tuple(exps)] = 1
    if degree == 0:
        return LaurentPolynomial.one(table)
    return LaurentPolynomial(table, out)


def _reduce_one_block(p: LaurentPolynomial, s_idx, e_idx) -> LaurentPolynomial:
    table = p.table
    if not block_symmetric(p, s_idx):
        raise NotBlockSymmetricError("not block-symmetric")
    done: dict = {}
    work = dict(p.terms)
    expanded_cache = {}
    while work:
        best = None
        for key in work:
            bv = tuple(key[i] for i in s_idx)
            if best is None or bv > best:
                best = bv
        if not any(best):
            for key, c in work.items():
                v = done.get(key, 0) + c
                if v:
                    done[key] = v
                else:
                    done.pop(key, None)
            break
        if any(best[a] < best[a + 1] for a in range(len(best) - 1)):
            raise NotBlockSymmetricError("not block-symmetric")
        coeff_terms = {}
        for key, c in work.items():
            if tuple(key[i] for i in s_idx) == best:
                stripped = list(key)
                for i in s_idx:
                    stripped[i] = 0
                coeff_terms[tuple(stripped)] = c
        coeff = LaurentPolynomial(table, coeff_terms)
        mults = [best[a] - best[a + 1] for a in range(len(best) - 1)] + [best[-1]]
        e_mono = [0] * len(table)
        expansion = LaurentPolynomial.one(table)
        for deg0, m in enumerate(mults):
            if not m:
                continue
            e_mono[e_idx[deg0]] += m
            base = expanded_cache.get(deg0)
            if base is None:
                base = elementary_symmetric(table, s_idx, deg0 + 1)
                expanded_cache[deg0] = base
            expansion = expansion * base ** m
        contribution = coeff * LaurentPolynomial(table, {tuple(e_mono): 1})
        for key, c in contribution.terms.items():
            v = done.get(key, 0) + c
            if v:
                done[key] = v
            else:
                done.pop(key, None)
        sub = coeff * expansion
        for key, c in sub.terms.items():
            v = work.get(key, 0) - c
            if v:
                work[key] = v
            else:
                work.pop(key, None)
    return LaurentPolynomial(table, done)


def elementary_reduce(p: LaurentPolynomial, blocks) -> LaurentPolynomial:
    """Rewrite a block-symmetric polynomial in elementary symmetric symbols.

    `blocks` is a sequence of (s_indices, e_indices) pairs, one per block;
    the result carries no block variable and is the unique representation
    of p as a polynomial in the e-symbols with block-free coefficients.
    Raises NotBlockSymmetricError when p fails the symmetry precondition,
    ValueError when p is not polynomial in the block variables or already
    mentions an e-symbol.
    """
    for s_idx, e_idx in blocks:
        for exps in p.terms:
            for i in s_idx:
                if exps[i] < 0:
                    raise ValueError("not polynomial in the splitting variables")
            for i in e_idx:
                if exps[i]:
                    raise ValueError("input already mentions an elementary symbol")
    out = p
    for s_idx, e_idx in blocks:
        out = _reduce_one_block(out, s_idx, e_idx)
    return out


@dataclass(frozen=True)
class SymbolBlock:
    """One splitting block: its s-variables, e-symbol slots and e-targets.

    `targets` has one rational function per degree 1..r; the top degree
    target is the constant 1 by construction of the substitution.
    """

    s_idx: tuple
    e_idx: tuple
    targets: tuple


@dataclass(frozen=True)
class ElementarySymbols:
    """Substitution data for eliminating all splitting variables."""

    table: VariableTable
    blocks: tuple
    cache: dict = field(default_factory=dict, compare=False, repr=False)

    def all_s_indices(self):
        out = []
        for b in self.blocks:
            out.extend(b.s_idx)
        return out

    def reduce_blocks(self):
        return [(b.s_idx, b.e_idx) for b in self.blocks]

    def target_assignment(self):
        assign = {}
        for b in self.blocks:
            for e_i, value in zip(b.e_idx, b.targets):
                assign[e_i] = value
        return assign


def _split_s_content(p: LaurentPolynomial, symbols: ElementarySymbols):
    """Factor out the s-monomial content, requiring equal exponents per block.

    Returns the content-free part; the content itself maps to 1 under the
    substitution (each block contributes a power of the full block product).
    """
    content = p.monomial_content()
    shift = [0] * len(p.table)
    for b in symbols.blocks:
        exps = [content[i] for i in b.s_idx]
        if len(set(exps)) > 1:
            raise PsiDomainError("not in domain of psi_hat")
        if exps and exps[0]:
            for i in b.s_idx:
                shift[i] = -exps[0]
    if any(shift):
        p = p.shift(tuple(shift))
    return p


def symmetric_e_form(p: LaurentPolynomial, symbols: ElementarySymbols) -> LaurentPolynomial:
    """Content-cleared rewriting of p in the elementary symbols."""
    p = _split_s_content(p, symbols)
    try:
        return elementary_reduce(p, symbols.reduce_blocks())
    except NotBlockSymmetricError:
        raise PsiDomainError("not in domain of psi_hat") from None


def _monomial_class_value(symbols: ElementarySymbols, b_index: int, lam: tuple):
    """Image of one monomial-symmetric class of a single block."""
    cached = symbols.cache.get((b_index, lam))
    if cached is not None:
        return cached
    table = symbols.table
    block = symbols.blocks[b_index]
    terms = {}
    for perm in set(itertools.permutations(lam)):
        exps = [0] * len(table)
        for idx, e in zip(block.s_idx, perm):
            exps[idx] = e
        terms[tuple(exps)] = 1
    orbit_poly = LaurentPolynomial(table, terms)
    reduced = _reduce_one_block(orbit_poly, block.s_idx, block.e_idx)
    value = reduced.evaluate(symbols.target_assignment())
    symbols.cache[(b_index, lam)] = value
    return value


def _symmetric_value(p: LaurentPolynomial, symbols: ElementarySymbols) -> RationalFunction:
    """Evaluation-only elimination through monomial-symmetric classes.

    Splits the polynomial into orbits of monomials under the block
    transpositions; each orbit is one monomial-symmetric pattern per block
    times a block-free rest, whose image is computed once per pattern and
    cached on the substitution data. This never materializes the rewriting
    of the whole polynomial, so it scales to inputs far beyond what the
    term-by-term elimination can handle.
    """
    table = p.table
    p = _split_s_content(p, symbols)
    for b in symbols.blocks:
        if not block_symmetric(p, b.s_idx):
            raise PsiDomainError("not in domain of psi_hat")
    classes = {}
    for exps, c in p.terms.items():
        lams = []
        rest = list(exps)
        representative = True
        for b in symbols.blocks:
            vals = tuple(exps[i] for i in b.s_idx)
            lam = tuple(sorted(vals, reverse=True))
            if vals != lam:
                representative = False
                break
            lams.append(lam)
            for i in b.s_idx:
                rest[i] = 0
        if not representative:
            continue
        classes[(tuple(lams), tuple(rest))] = c
    total: dict = {}

    def accumulate(poly):
        for key, v in poly.terms.items():
            newv = total.get(key, 0) + v
            if newv:
                total[key] = newv
            else:
                total.pop(key, None)

    rf_total = None
    for (lams, rest), c in classes.items():
        value = None
        plain = True
        for b_index, lam in enumerate(lams):
            if not any(lam):
                continue
            v = _monomial_class_value(symbols, b_index, lam)
            plain = plain and v.den.is_one()
            value = v if value is None else value * v
        base = LaurentPolynomial(table, {rest: c})
        if value is None:
            accumulate(base)
        elif plain and value.den.is_one():
            accumulate(base * value.num)
        else:
            part = RationalFunction.from_poly(base) * value
            rf_total = part if rf_total is None else rf_total + part
    poly_total = LaurentPolynomial(table, total)
    if rf_total is None:
        return RationalFunction.from_poly(poly_total)
    return rf_total + RationalFunction.from_poly(poly_total)


_CERT_LIMIT = 2000


def _part_image(p: LaurentPolynomial, symbols: ElementarySymbols,
                require_nonneg: bool) -> RationalFunction:
    """Image of one fraction part, certifying cone membership when feasible."""
    if require_nonneg and len(p.terms) <= _CERT_LIMIT:
        reduced = symmetric_e_form(p, symbols)
        if any(c < 0 for c in reduced.terms.values()):
            raise PsiConeError("not in domain of psi_hat")
        return reduced.evaluate(symbols.target_assignment())
    return _symmetric_value(p, symbols)


def psi_hat_factored(ff: "FactoredFraction", symbols: ElementarySymbols,
                     require_nonneg: bool = False) -> "FactoredFraction":
    """Eliminate splitting variables from a factored fraction, orbit by orbit.

    The map is multiplicative, so it suffices to apply it to the product of
    each orbit of factors under the block transpositions; pattern-generated
    fractions always carry complete orbits with a uniform exponent. Any
    factor set that is not orbit-complete falls back to the expanded route.
    The result stays factored, one factor per orbit image.
    """
    table = ff.table
    swaps = []
    for b in symbols.blocks:
        for a in range(len(b.s_idx) - 1):
            swaps.append((b.s_idx[a], b.s_idx[a + 1]))

    def orbit_of(poly):
        seen = {FactoredFraction._key(poly): poly}
        frontier = [poly]
        while frontier:
            cur = frontier.pop()
            for i, j in swaps:
                img = LaurentPolynomial(
                    table, {_swap_key(key, i, j): c for key, c in cur.terms.items()}
                )
                k = FactoredFraction._key(img)
                if k not in seen:
                    seen[k] = img
                    frontier.append(img)
        return seen

    remaining = dict(ff.factors)
    out = FactoredFraction.one(table)
    while remaining:
        key = next(iter(remaining))
        poly, exp = remaining[key]
        orbit = orbit_of(poly)
        if any(
            k not in remaining or remaining[k][1] != exp for k in orbit
        ):
            return FactoredFraction.from_ratfn(
                psi_hat(ff.expand(), symbols, require_nonneg)
            )
        product = LaurentPolynomial.one(table)
        for k in orbit:
            product = product * remaining.pop(k)[0]
        try:
            value = _part_image(product, symbols, require_nonneg)
        except PsiConeError:
            # an orbit can look signed even when the full product is not
            value = _symmetric_value(product, symbols)
        if value.is_zero():
            raise PsiKernelError(
                "denominator in kernel of psi_hat"
                if exp < 0
                else "factor image vanishes under psi_hat"
            )
        out = out * FactoredFraction.from_ratfn(value) ** exp
    return out


def psi_hat(f: RationalFunction, symbols: ElementarySymbols,
            require_nonneg: bool = False) -> RationalFunction:
    """Eliminate splitting variables through the elementary-symbol targets.

    Both parts of the fraction are cleared of s-monomial content, rewritten
    in the elementary symbols, and evaluated at the block targets (top
    symbol to 1). `require_nonneg` additionally insists that both rewritten
    parts have nonnegative integer coefficients, the domain condition of
    the semifield-level map (certified up to a size cutoff; larger parts
    are evaluated through the class decomposition instead).
    """
    num = _part_image(f.num, symbols, require_nonneg)
    den = _part_image(f.den, symbols, require_nonneg)
    if den.is_zero():
        raise PsiKernelError("denominator in kernel of psi_hat")
    return num / den


def cross_evaluate(poly: LaurentPolynomial, assign: dict,
                   target: VariableTable) -> "RationalFunction":
    """Evaluate a polynomial into another table.

    `assign` maps source variable indices to RationalFunction values on the
    target table; every variable supported by the polynomial must be
    assigned. Uses a plain exponent remap when all values are unit
    monomials.
    """
    unit = {}
    for idx, value in assign.items():
        mono = _as_unit_monomial(value)
        if mono is None:
            unit = None
            break
        unit[idx] = mono
    width = len(target)
    if unit is not None:
        out: dict = {}
        for exps, c in poly.terms.items():
            new = [0] * width
            for i, e in enumerate(exps):
                if not e:
                    continue
                mono = unit[i]
                for t, me in enumerate(mono):
                    if me:
                        new[t] += e * me
            key = tuple(new)
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return RationalFunction.from_poly(LaurentPolynomial(target, out))
    total = RationalFunction.zero(target)
    for exps, c in poly.terms.items():
        value = RationalFunction.constant(target, c)
        for i, e in enumerate(exps):
            if e:
                value = value * assign[i] ** e
        total = total + value
    return total


# -- Laurent expansion over a distinguished variable group ------------------


def laurent_expand(f: RationalFunction, main_idx):
    """Expand f as a Laurent polynomial in the main variables.

    Coefficients live in the fraction field of the remaining variables.
    Returns a dict from main-variable exponent tuples (restricted to
    `main_idx`, in that order) to RationalFunction coefficients, or None
    when f is not Laurent in the main variables.
    """
    table = f.table
    main = list(main_idx)

    def split(poly):
        out = {}
        for exps, c in poly.terms.items():
            key = tuple(exps[i] for i in main)
            rest = list(exps)
            for i in main:
                rest[i] = 0
            mono = LaurentPolynomial(table, {tuple(rest): c})
            if key in out:
                out[key] = out[key] + mono
            else:
                out[key] = mono
        return out

    num = {k: RationalFunction.from_poly(v) for k, v in split(f.num).items()}
    den = {k: RationalFunction.from_poly(v) for k, v in split(f.den).items()}
    dlead = max(den)
    dcoeff = den[dlead]
    out = {}
    cap = 4 * (len(num) + 1) * (len(den) + 1) + 64
    steps = 0
    while num:
        steps += 1
        if steps > cap:
            return None
        lead = max(num)
        q = num[lead] / dcoeff
        key = tuple(a - b for a, b in zip(lead, dlead))
        out[key] = q
        for dk, dv in den.items():
            nk = tuple(a + b for a, b in zip(key, dk))
            cur = num.get(nk)
            update = cur - q * dv if cur is not None else -(q * dv)
            if update.is_zero():
                num.pop(nk, None)
            else:
                num[nk] = update
    return out
