"""Sparse multivariate polynomials over the rationals.

Coefficients are :class:`fractions.Fraction` (or plain ``int`` when
integral); nothing here ever rounds.  Polynomials carry their own ordered
variable names and are aligned by name when combined, so ``x + y`` built
from two different universes just works.

Reduction modulo a set of :class:`RewriteRule` objects is plain
multivariate division.  It is a complete normal form only when the
leading monomials of the rules are pairwise coprime, which is checked.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Union

Rat = Fraction
Scalar = Union[int, Fraction]
Monomial = tuple


def as_rat(value) -> Scalar:
    """Coerce ``value`` to an exact rational (``int`` when integral)."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        return as_rat(Fraction(value))
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def _norm(c: Scalar) -> Scalar:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class RatPoly:
    """Immutable sparse polynomial ``sum c * prod(v_i ** e_i)``.

    ``terms`` maps exponent tuples (one entry per variable, in the order of
    ``variables``) to nonzero rational coefficients.
    """

    __slots__ = ("variables", "terms", "_index")

    def __init__(self, variables: Iterable[str], terms: Mapping[Monomial, Scalar] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        clean = {}
        n = len(variables)
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} does not match {n} variables")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = as_rat(c)
            if c:
                clean[exps] = c
        self.variables = variables
        self.terms = clean
        self._index = {v: i for i, v in enumerate(variables)}

    # construction helpers -------------------------------------------------

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "RatPoly":
        # trusted path: terms already clean
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        obj._index = {v: i for i, v in enumerate(variables)}
        return obj

    @classmethod
    def var(cls, name: str) -> "RatPoly":
        return cls._raw((name,), {(1,): 1})

    @classmethod
    def const(cls, value, variables: Iterable[str] = ()) -> "RatPoly":
        variables = tuple(variables)
        value = as_rat(value)
        return cls._raw(variables, {(0,) * len(variables): value} if value else {})

    @classmethod
    def zero(cls, variables: Iterable[str] = ()) -> "RatPoly":
        return cls._raw(tuple(variables), {})

    # alignment ------------------------------------------------------------

    def with_variables(self, variables: Iterable[str]) -> "RatPoly":
        """Re-express over a superset ``variables`` (any order)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        missing = [v for v in self.variables if v not in variables]
        if missing:
            nonzero = {v for exps in self.terms for v, e in zip(self.variables, exps) if e}
            lost = [v for v in missing if v in nonzero]
            if lost:
                raise ValueError(f"cannot drop variables {lost} that occur in the polynomial")
        pos = [self._index.get(v) for v in variables]
        terms = {tuple(exps[p] if p is not None else 0 for p in pos): c for exps, c in self.terms.items()}
        return RatPoly._raw(variables, terms)

    def _align(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if self.variables == other.variables:
            return self, other
        merged = self.variables + tuple(v for v in other.variables if v not in self._index)
        return self.with_variables(merged), other.with_variables(merged)

    def _coerce(self, other) -> "RatPoly":
        if isinstance(other, RatPoly):
            return other
        return RatPoly.const(other, self.variables)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "RatPoly":
        a, b = self._align(self._coerce(other))
        terms = dict(a.terms)
        for m, c in b.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = _norm(s)
            else:
                terms.pop(m, None)
        return RatPoly._raw(a.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly._raw(self.variables, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "RatPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatPoly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "RatPoly":
        other = self._coerce(other)
        a, b = self._align(other)
        if len(b.terms) == 1 and not any(next(iter(b.terms))):
            k = next(iter(b.terms.values()))
            return RatPoly._raw(a.variables, {m: _norm(c * k) for m, c in a.terms.items()})
        terms: dict = {}
        get = terms.get
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = tuple(i + j for i, j in zip(m1, m2))
                terms[m] = get(m, 0) + c1 * c2
        return RatPoly._raw(a.variables, {m: _norm(c) for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RatPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = RatPoly.const(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, k) -> "RatPoly":
        k = as_rat(k)
        if not k:
            return RatPoly.zero(self.variables)
        return RatPoly._raw(self.variables, {m: _norm(c * k) for m, c in self.terms.items()})

    # inspection -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatPoly):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        a, b = self._align(other)
        return a.terms == b.terms

    def __hash__(self):
        return hash(frozenset(self.with_variables(sorted(self.free_variables())).terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def free_variables(self) -> set[str]:
        return {v for exps in self.terms for v, e in zip(self.variables, exps) if e}

    def degree(self, name: str | None = None) -> int:
        if not self.terms:
            return -1
        if name is None:
            return max(sum(m) for m in self.terms)
        if name not in self._index:
            return 0
        i = self._index[name]
        return max(m[i] for m in self.terms)

    def coefficient(self, monomial: Mapping[str, int]) -> Scalar:
        key = [0] * len(self.variables)
        for v, e in monomial.items():
            if v not in self._index:
                if e:
                    return 0
                continue
            key[self._index[v]] = e
        return self.terms.get(tuple(key), 0)

    def is_homogeneous_in(self, names: Iterable[str], degree: int) -> bool:
        idx = [self._index[n] for n in names if n in self._index]
        return all(sum(m[i] for i in idx) == degree for m in self.terms)

    def content(self) -> Fraction:
        """Positive rational g with ``self / g`` primitive over the integers."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            c = Fraction(c)
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    # evaluation -----------------------------------------------------------

    def subs(self, assignment: Mapping[str, object]) -> "RatPoly":
        """Substitute polynomials or rationals for some variables."""
        keep = [v for v in self.variables if v not in assignment]
        result = RatPoly.zero(keep)
        powers: dict = {}

        def power(name, e):
            key = (name, e)
            if key not in powers:
                val = assignment[name]
                val = val if isinstance(val, RatPoly) else RatPoly.const(val)
                powers[key] = val ** e
            return powers[key]

        kept_idx = [self._index[v] for v in keep]
        sub_idx = [(v, self._index[v]) for v in self.variables if v in assignment]
        for m, c in self.terms.items():
            term = RatPoly._raw(tuple(keep), {tuple(m[i] for i in kept_idx): c})
            for name, i in sub_idx:
                if m[i]:
                    term = term * power(name, m[i])
            result = result + term
        return result

    def __call__(self, **assignment):
        return eval_poly(self, assignment)

    def __repr__(self) -> str:
        return f"RatPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, m) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def variables(*names: str) -> tuple[RatPoly, ...]:
    """``x, y = variables("x", "y")``."""
    return tuple(RatPoly.var(n) for n in names)


def poly_arith(p: RatPoly, q: RatPoly, op: str) -> RatPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}; expected add, sub or mul")


def eval_poly(p: RatPoly, assignment: Mapping[str, object]):
    """Exact value of ``p`` at a full assignment of its variables.

    Values may be rationals or anything supporting ``+``/``*`` with
    rationals (complex floats, mpmath numbers); only rationals give an
    exact result.
    """
    missing = [v for v in p.free_variables() if v not in assignment]
    if missing:
        raise KeyError(f"no value given for variable(s) {', '.join(sorted(missing))}")
    vals = []
    for v in p.variables:
        x = assignment.get(v, 0)
        vals.append(as_rat(x) if isinstance(x, (int, Fraction, str)) else x)
    total = 0
    for m, c in p.terms.items():
        t = c
        for x, e in zip(vals, m):
            if e:
                t = t * x ** e
        total = total + t
    return _norm(total) if isinstance(total, (int, Fraction)) else total


class RewriteRule:
    """``lead -> replacement`` derived from a relation ``lead - replacement = 0``.

    ``lead`` is a single monomial (coefficient one).  Build rules with
    :meth:`from_relation`, which normalises by the leading coefficient.
    """

    __slots__ = ("variables", "lead", "replacement", "relation")

    def __init__(self, lead: Mapping[str, int], replacement: RatPoly):
        lead = {v: e for v, e in lead.items() if e}
        if not lead:
            raise ValueError("leading monomial must be non-constant")
        names = tuple(lead) + tuple(v for v in replacement.variables if v not in lead)
        replacement = replacement.with_variables(names)
        lead_exps = tuple(lead.get(v, 0) for v in names)
        for m in replacement.terms:
            if all(a >= b for a, b in zip(m, lead_exps)):
                raise ValueError("replacement contains a monomial divisible by the leading monomial")
        self.variables = names
        self.lead = dict(lead)
        self.replacement = replacement
        self.relation = RatPoly._raw(names, {lead_exps: 1}) - replacement

    @classmethod
    def from_relation(cls, relation: RatPoly, lead: Mapping[str, int]) -> "RewriteRule":
        c = relation.coefficient(lead)
        if not c:
            raise ValueError(f"monomial {lead} does not occur in the relation")
        key = tuple(lead.get(v, 0) for v in relation.variables)
        rest = RatPoly._raw(relation.variables, {m: k for m, k in relation.terms.items() if m != key})
        return cls(lead, (-rest).scale(Fraction(1) / c))

    def __repr__(self) -> str:
        mono = "*".join(f"{v}^{e}" for v, e in self.lead.items())
        return f"RewriteRule({mono} -> {self.replacement})"


class NonConfluentRules(ValueError):
    """Raised when rules have leading monomials sharing a variable."""


def _check_coprime(rules: list[RewriteRule]) -> None:
    for i, r in enumerate(rules):
        for s in rules[i + 1:]:
            shared = set(r.lead) & set(s.lead)
            if shared:
                raise NonConfluentRules(
                    f"leading monomials of {r!r} and {s!r} share {sorted(shared)}; "
                    "division would not give a normal form"
                )


def _reduction_order(p: RatPoly, rules: list[RewriteRule]) -> tuple[str, ...]:
    lead_vars: list[str] = []
    for r in rules:
        for v in r.lead:
            if v not in lead_vars:
                lead_vars.append(v)
    rest: list[str] = []
    for vs in [p.variables] + [r.variables for r in rules]:
        for v in vs:
            if v not in lead_vars and v not in rest:
                rest.append(v)
    return tuple(lead_vars) + tuple(rest)


def reduce_mod(p: RatPoly, rules: list[RewriteRule]) -> RatPoly:
    """Normal form of ``p`` modulo ``rules`` by repeated division.

    Terms are processed in decreasing lex order over (leading-monomial
    variables first); every rule's leading monomial must dominate its
    replacement in that order, otherwise ``ValueError``.
    """
    rules = list(rules)
    _check_coprime(rules)
    if not rules:
        return p
    order = _reduction_order(p, rules)
    p = p.with_variables(order)
    prepared = []
    for r in rules:
        lead = tuple(r.lead.get(v, 0) for v in order)
        tail = r.replacement.with_variables(order)
        if any(m >= lead for m in tail.terms):
            raise ValueError(f"{r!r} is not oriented by lex order on {order}")
        prepared.append((lead, list(tail.terms.items())))

    def divisor(m):
        for lead, tail in prepared:
            if all(a >= b for a, b in zip(m, lead)):
                return lead, tail
        return None

    pending = dict(p.terms)
    heap = [tuple(-e for e in m) for m in pending]
    heapq.heapify(heap)
    out: dict = {}
    while heap:
        neg = heapq.heappop(heap)
        m = tuple(-e for e in neg)
        c = pending.pop(m, 0)
        if not c:
            continue
        hit = divisor(m)
        if hit is None:
            out[m] = c
            continue
        lead, tail = hit
        base = tuple(a - b for a, b in zip(m, lead))
        for t, tc in tail:
            n = tuple(a + b for a, b in zip(base, t))
            if n in pending:
                pending[n] = pending[n] + c * tc
            else:
                pending[n] = c * tc
                heapq.heappush(heap, tuple(-e for e in n))
    return RatPoly._raw(order, {m: _norm(c) for m, c in out.items() if c})


def reduce_product(factors: Iterable[RatPoly], rules: list[RewriteRule]) -> RatPoly:
    """Reduce a product factor by factor; keeps intermediates small."""
    acc = None
    for f in factors:
        acc = reduce_mod(f if acc is None else acc * f, rules)
    return acc if acc is not None else RatPoly.const(1)


def imaginary_unit_rule(name: str = "I") -> RewriteRule:
    """``I^2 -> -1``: lets identities with Gaussian-rational coefficients be
    checked over Q[I] with the same division machinery."""
    return RewriteRule({name: 2}, RatPoly.const(-1))
