"""Exact solving of polynomial constraint systems by component splitting.

``solve_components`` decomposes the solution set of a finite system over QQ
into components, each given by a reduced Groebner basis together with a set of
variables assumed nonzero on that component.  Splitting happens only on
monomial content (an equation of the form v^k * q = 0 splits into v = 0 and
v != 0, q = 0), so the decomposition is exact and the components partition the
solution set.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .coeffs import MPoly, PolyRing
from .groebner import buchberger, nf_mod_ideal

DEFAULT_POOL = (Fraction(0), Fraction(1), Fraction(-1), Fraction(2),
                Fraction(-2), Fraction(1, 2))


@dataclass(frozen=True)
class SolutionComponent:
    """One component: V(basis) minus the zero loci of the nonzero variables."""

    ring: PolyRing
    basis: tuple            # reduced lex Groebner basis, monic, sorted
    nonzero: tuple = ()     # variable names assumed nonzero
    representative: dict = field(default=None, compare=False)

    def contains_point(self, point: dict) -> bool:
        if any(g.evaluate(point) != 0 for g in self.basis):
            return False
        return all(Fraction(point[v]) != 0 for v in self.nonzero)

    def is_member(self, p: MPoly) -> bool:
        """Whether p vanishes identically on the component's closure."""
        return nf_mod_ideal(p, self.basis).is_zero

    def describe(self) -> str:
        eqs = ", ".join(f"{g} = 0" for g in self.basis) or "no equations"
        if self.nonzero:
            eqs += "; " + ", ".join(f"{v} != 0" for v in self.nonzero)
        return eqs


class SplitDepthExceeded(RuntimeError):
    pass


def solve_components(eqs, ring: PolyRing, max_depth: int = 64,
                     with_representatives: bool = True):
    """Decompose {all eqs = 0} into SolutionComponents (possibly empty list)."""
    leaves: list = []
    _presplit([e for e in eqs if not (isinstance(e, MPoly) and e.is_zero)],
              {}, frozenset(), ring, max_depth, leaves)
    leaves = _merge_leaves(leaves, ring)
    out = []
    for basis, nonzero in leaves:
        rep = find_representative(basis, nonzero, ring) if with_representatives else None
        out.append(SolutionComponent(ring, basis, tuple(sorted(nonzero)),
                                     representative=rep))
    out.sort(key=lambda c: (len(c.basis), tuple(str(g) for g in c.basis), c.nonzero))
    return out


def _strip_normalize(eqs, nonzero, ring):
    """Drop zeros and duplicates, divide out assumed-nonzero variable content,
    and scale each equation monic; None when a nonzero constant appears."""
    out = []
    seen = set()
    for g in eqs:
        if g.is_zero:
            continue
        content = g.monomial_content()
        strip = tuple(k if ring.vars[i] in nonzero else 0
                      for i, k in enumerate(content))
        if any(strip):
            g = g.divide_monomial(strip)
        if g.is_constant:
            if g.constant_value() != 0:
                return None
            continue
        g = g / g.terms[max(g.terms)]
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


def _find_pin(g, ring):
    """A (variable, value) pair when g is linear in the variable with a
    constant coefficient, else None."""
    for name in sorted(g.variables()):
        if g.degree_in(name) != 1:
            continue
        i = ring.index[name]
        coeff = ring.zero()
        rest = ring.zero()
        for e, c in g.terms.items():
            if e[i]:
                reduced = tuple(0 if j == i else k for j, k in enumerate(e))
                coeff = coeff + ring.monomial(reduced, c)
            else:
                rest = rest + ring.monomial(e, c)
        if coeff.is_constant and not coeff.is_zero:
            return name, rest / (-coeff.constant_value())
    return None


def _presplit(eqs, assign, nonzero, ring, depth, leaves) -> None:
    """Cheap substitution-driven case analysis before any Groebner work.

    Variables pinned linearly are substituted away; equations with a common
    variable factor branch on that variable.  Residual systems too tangled
    for either move fall through to the Groebner splitter with the pin
    equations restored, so the ideal is preserved exactly.
    """
    if depth < 0:
        raise SplitDepthExceeded("component splitting exceeded the depth cap")
    while True:
        eqs = _strip_normalize(eqs, nonzero, ring)
        if eqs is None:
            return
        pin = None
        for g in sorted(eqs, key=lambda h: (len(h.terms), str(h))):
            pin = _find_pin(g, ring)
            if pin:
                break
        if pin is None:
            break
        name, value = pin
        assign = {k: v.subs({name: value}) for k, v in assign.items()}
        assign[name] = value
        eqs = [h.subs({name: value}) for h in eqs]
    for g in sorted(eqs, key=lambda h: (len(h.terms), str(h))):
        content = g.monomial_content()
        cand = sorted(ring.vars[i] for i, k in enumerate(content) if k)
        if not cand:
            continue
        name = cand[0]
        zero = ring.zero()
        _presplit([h.subs({name: zero}) for h in eqs],
                  {k: v.subs({name: zero}) for k, v in assign.items()}
                  | {name: zero},
                  nonzero, ring, depth - 1, leaves)
        _presplit(eqs, assign, nonzero | {name}, ring, depth - 1, leaves)
        return
    residual = list(eqs) + [ring.var(v) - val for v, val in
                            sorted(assign.items())]
    _split(residual, nonzero, ring, depth, leaves)


def _split(eqs, nonzero, ring, depth, leaves) -> None:
    if depth < 0:
        raise SplitDepthExceeded("component splitting exceeded the depth cap")
    eqs = _pin_linear(list(eqs), ring)
    basis = buchberger(eqs, ring)
    # saturate: divide assumed-nonzero variable powers out of the generators
    while True:
        if any(g.is_constant and not g.is_zero for g in basis):
            return  # inconsistent: empty component
        stripped = []
        changed = False
        for g in basis:
            content = g.monomial_content()
            strip = tuple(k if ring.vars[i] in nonzero else 0
                          for i, k in enumerate(content))
            if any(strip):
                g = g.divide_monomial(strip)
                changed = True
            stripped.append(g)
        if not changed:
            break
        new_basis = buchberger(stripped, ring)
        if new_basis == basis:
            break
        basis = new_basis
    for v in nonzero:
        if nf_mod_ideal(ring.var(v), basis).is_zero:
            return  # v is forced to 0 but assumed nonzero
    for g in basis:
        content = g.monomial_content()
        candidates = [ring.vars[i] for i, k in enumerate(content)
                      if k and ring.vars[i] not in nonzero]
        if not candidates:
            continue
        name = candidates[0]
        if g == ring.var(name):
            continue  # the generator already says v = 0 outright
        # branch v = 0: the ideal strictly grows (v was not a member)
        _split(list(basis) + [ring.var(name)], nonzero, ring, depth - 1, leaves)
        # branch v != 0: divide the v-power out of g
        i = ring.index[name]
        exps = tuple(content[i] if j == i else 0 for j in range(ring.nvars))
        reduced = [h for h in basis if h != g] + [g.divide_monomial(exps)]
        _split(reduced, nonzero | {name}, ring, depth - 1, leaves)
        return
    # drop assumptions the ideal already implies (v congruent to a nonzero constant)
    live = frozenset(v for v in nonzero
                     if not nf_mod_ideal(ring.var(v), basis).is_constant)
    leaves.append((basis, live))


def _pin_linear(eqs, ring):
    """Eliminate variables that occur linearly with constant coefficient.

    The defining equations are kept, so the ideal is unchanged; this just
    speeds up the Groebner step on large ansatz systems.
    """
    pinned = {}
    changed = True
    while changed:
        changed = False
        for g in eqs:
            if g.is_zero:
                continue
            for name in g.variables():
                if g.degree_in(name) != 1:
                    continue
                i = ring.index[name]
                coeff = ring.zero()
                rest = ring.zero()
                for e, c in g.terms.items():
                    if e[i]:
                        reduced = tuple(0 if j == i else k for j, k in enumerate(e))
                        coeff = coeff + ring.monomial(reduced, c)
                    else:
                        rest = rest + ring.monomial(e, c)
                if not coeff.is_constant or coeff.is_zero:
                    continue
                value = rest / (-coeff.constant_value())
                pinned[name] = value
                eqs = [h.subs({name: value}) for h in eqs]
                changed = True
                break
            if changed:
                break
    out = [g for g in eqs if not g.is_zero]
    for name, value in pinned.items():
        # re-substitute later pins so each defining equation is in solved form
        out.append(ring.var(name) - value.subs(pinned))
    return out


def _merge_leaves(leaves, ring):
    """Join complementary leaves: (I + (v), N) and (I, N + {v}) --> (I, N).

    The union is exact, so merging loses nothing and undoes splits that turned
    out not to matter.
    """
    leaves = list(dict.fromkeys(leaves))
    merged = True
    while merged:
        merged = False
        for (b1, n1), (b2, n2) in itertools.permutations(leaves, 2):
            extra = n2 - n1
            if len(extra) != 1 or n1 - n2:
                continue
            v = next(iter(extra))
            if buchberger(list(b2) + [ring.var(v)], ring) == b1:
                leaves.remove((b1, n1))
                leaves.remove((b2, n2))
                leaves.append((b2, n2 - {v}))
                merged = True
                break
    return leaves


# -- rational points on components ------------------------------------------------


def rational_roots(coeffs) -> list:
    """All rational roots of sum(coeffs[i] * t^i) with Fraction coefficients."""
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial has every root")
    roots = set()
    while len(coeffs) > 1 and coeffs[0] == 0:
        roots.add(Fraction(0))
        coeffs = coeffs[1:]
    if len(coeffs) == 1:
        return sorted(roots)
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // _gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    a0, an = abs(ints[0]), abs(ints[-1])
    for p in _divisors(a0):
        for q in _divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if sum(c * cand ** i for i, c in enumerate(coeffs)) == 0:
                    roots.add(cand)
    return sorted(roots)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _univariate_coeffs(p: MPoly, name: str):
    """Coefficient list of p as a univariate in name, or None if other vars remain."""
    i = p.ring.index[name]
    coeffs = [Fraction(0)] * (p.degree_in(name) + 1)
    for e, c in p.terms.items():
        if any(k and j != i for j, k in enumerate(e)):
            return None
        coeffs[e[i]] += c
    return coeffs


def _try_point(basis, nonzero, ring, choose):
    """Build a point by propagation, taking free choices from ``choose``.

    choose(name, options) picks from explicit options (univariate roots) when
    options is not None, otherwise a free value.  Returns None on dead ends.
    """
    point: dict = {}
    eqs = list(basis)
    names = list(ring.vars)
    while True:
        eqs = [e.subs(point) for e in eqs]
        nonzero_live = []
        for e in eqs:
            if e.is_zero:
                continue
            if e.is_constant:
                return None
            nonzero_live.append(e)
        eqs = nonzero_live
        forced = None
        for e in eqs:
            free = [n for n in e.variables() if n not in point]
            if len(free) == 1:
                coeffs = _univariate_coeffs(e, free[0])
                if coeffs is not None:
                    forced = (free[0], coeffs)
                    break
        if forced is not None:
            name, coeffs = forced
            roots = rational_roots(coeffs)
            if name in nonzero:
                roots = [r for r in roots if r != 0]
            if not roots:
                return None
            val = choose(name, roots)
            if val is None:
                return None
            point[name] = val
            continue
        free_names = [n for n in names if n not in point]
        if not free_names:
            break
        name = free_names[0]
        val = choose(name, None)
        if val is None:
            return None
        point[name] = val
    if any(g.evaluate(point) != 0 for g in basis):
        return None
    if any(point[v] == 0 for v in nonzero):
        return None
    return point


def sample_points(basis, nonzero, ring, count: int, rng: random.Random,
                  pool=DEFAULT_POOL, max_attempts: int = 4000,
                  strict: bool = True):
    """Distinct exact rational points on the component.

    Raises when fewer than ``count`` are found, unless ``strict`` is False,
    in which case whatever was found is returned (a component with a finite
    small point set is exhausted rather than failed).
    """
    pool = [Fraction(p) for p in pool]
    found: list = []
    seen = set()
    for _ in range(max_attempts):
        if len(found) >= count:
            break

        def choose(name, options):
            if options is not None:
                return rng.choice(options)
            values = [v for v in pool if not (name in nonzero and v == 0)]
            return rng.choice(values)

        point = _try_point(basis, nonzero, ring, choose)
        if point is None:
            continue
        key = tuple(sorted(point.items()))
        if key not in seen:
            seen.add(key)
            found.append(point)
    if strict and len(found) < count:
        raise RuntimeError(
            f"found only {len(found)} of {count} requested rational points")
    return found


def find_representative(basis, nonzero, ring, pool=DEFAULT_POOL):
    """Deterministic simple point on the component, or None if the grid misses."""
    pool = [Fraction(p) for p in pool]

    # depth-first over pool choices at each free decision, simplest values first
    def attempt(script):
        step = iter(script)

        def choose(name, options):
            if options is not None:
                opts = sorted(options, key=lambda r: (abs(r), r < 0))
                if len(opts) == 1:
                    return opts[0]  # forced: spend no search budget
                idx = next(step, 0)
                return opts[idx] if idx < len(opts) else None
            idx = next(step, 0)
            values = [v for v in pool if not (name in nonzero and v == 0)]
            return values[idx] if idx < len(values) else None

        return _try_point(basis, nonzero, ring, choose)

    for depth in range(4):
        for script in itertools.product(range(len(pool)), repeat=depth):
            point = attempt(script)
            if point is not None:
                return point
    return None
