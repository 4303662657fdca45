"""Coefficient recursions for the z-series solution ansatz.

A separated solution of the heat equation is written as a Gaussian
prefactor times the bracket series

    z^delta + sum_{k>=2} Phi_k * z^(2k+delta) / (2k+delta)!

and the heat equation pins the coefficients order by order.  This module
builds the Phi_k three ways and keeps them exactly consistent:

* in jet variables (Phi_k as a polynomial of h and its derivatives),
* over the ansatz parameters x2..x_{n+1} for a general polynomial family,
* over x2..x_{n+1} for the reduced chain family driven by one top
  polynomial P_n.

Parity is delta in {0, 1}; odd-order entries vanish for the closed-form
families but are carried by the recursions regardless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .grpoly import GradedPoly, Numeric, VariableFamily
from .operators import basis_elements, derivative_chain, jet_derivative, weighted_derivative


def _check_delta(delta: int) -> int:
    if delta not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    return delta


@dataclass(frozen=True)
class PhiTable:
    """Series coefficients Phi_0, Phi_1, ..., indexable by order."""

    delta: int
    entries: tuple[GradedPoly, ...]

    def __post_init__(self):
        _check_delta(self.delta)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, k: int) -> GradedPoly:
        return self.entries[k]

    @property
    def family(self) -> VariableFamily:
        return self.entries[0].family

    @property
    def max_order(self) -> int:
        return len(self.entries) - 1


def jet_phi_table(delta: int, k_max: int) -> PhiTable:
    """Phi_k written in jet variables, for k = 0..k_max.

    Recursion: Phi_0 = 1, Phi_1 = 0 and

        Phi_k = 2 (D + 2(k-1) y1) Phi_{k-1}
                - (2k+delta-2)(2k+delta-3) (y2 + y1^2) Phi_{k-2},

    each entry homogeneous of degree -2k over y1..y_{k_max}.
    """
    _check_delta(delta)
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    ring = max(k_max, 2)
    y = VariableFamily.Y
    z2 = GradedPoly.variable(y, ring, 2) + GradedPoly.variable(y, ring, 1) ** 2
    entries = [GradedPoly.const(y, ring, 1), GradedPoly.zero(y, ring)]
    for k in range(2, k_max + 1):
        lead = 2 * weighted_derivative(k - 1, entries[k - 1])
        tail = (2 * k + delta - 2) * (2 * k + delta - 3) * (z2 * entries[k - 2])
        entries.append((lead.with_nvars(ring) - tail).with_nvars(ring))
    return PhiTable(delta, tuple(entries))


def _raise_basis_symbols(poly: GradedPoly) -> GradedPoly:
    # Derivation Z_j -> Z_{j+1} on basis-symbol polynomials.  Substitutes
    # for the weighted derivative exactly when the operator weight equals
    # the monomial weight, which the remainder recursion guarantees.
    nvars = poly.nvars + 1
    acc = GradedPoly.zero(VariableFamily.Y, nvars)
    for exps, coeff in poly.terms():
        for pos in range(1, len(exps)):
            e = exps[pos]
            if not e:
                continue
            shifted = list(exps) + [0]
            shifted[pos] -= 1
            shifted[pos + 1] += 1
            acc = acc + GradedPoly(VariableFamily.Y, nvars, {tuple(shifted): coeff * e})
    return acc


def jet_phi_remainders(delta: int, k_max: int) -> list[GradedPoly]:
    """The tails Q_k with Phi_k = -2^(k-2) (2+delta)(1+delta) Z_k + Q_k.

    Entries are polynomials in basis symbols (position k-1 stands for
    Z_k; position 0, y1, never occurs).  Q_0 = Q_1 undefined and returned
    as 0; Q_2 = Q_3 = 0 and

        Q_k = 2 R Q_{k-1} + (2k+delta-2)(2k+delta-3) Z_2 *
              (2^(k-4) (2+delta)(1+delta) Z_{k-2} - Q_{k-2}),

    with R the index-raising derivation Z_j -> Z_{j+1}.
    """
    _check_delta(delta)
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    ring = k_max
    zero = GradedPoly.zero(VariableFamily.Y, ring)
    z_sym = lambda j: GradedPoly.variable(VariableFamily.Y, ring, j) if j >= 2 else zero
    out = [zero, zero, zero, zero][: k_max + 1]
    while len(out) < k_max + 1:
        k = len(out)
        lead = 2 * _raise_basis_symbols(out[k - 1])
        c = Fraction((2 * k + delta - 2) * (2 * k + delta - 3))
        inner = Fraction(2) ** (k - 4) * (2 + delta) * (1 + delta) * z_sym(k - 2) - out[k - 2]
        out.append((lead.with_nvars(ring) + c * (z_sym(2) * inner)).with_nvars(ring))
    return out


@dataclass(frozen=True)
class AnsatzSpec:
    """Polynomial data driving an n-parameter ansatz.

    ``general`` mode stores the family p_2, ..., p_{n+2} (deg p_q = -2q)
    with the top chain variable x_{n+2} already substituted by zero, all
    over the ring x2..x_{n+1}.  ``reduced`` mode stores the single top
    polynomial P_n of degree -2(n+2) in x2..x_n.
    """

    n: int
    delta: int
    mode: str
    ps: tuple[GradedPoly, ...] = ()
    top: Union[GradedPoly, None] = None

    @staticmethod
    def _cap(poly: GradedPoly, n: int, q: int) -> GradedPoly:
        if poly.family is not VariableFamily.X:
            raise ValueError("ansatz polynomials live over the X family")
        if not poly.is_homogeneous():
            raise ValueError(f"p_{q} must be homogeneous")
        if not poly.is_zero and poly.degree() != -2 * q:
            raise ValueError(f"p_{q} must have degree {-2 * q}, got {poly.degree()}")
        # x_{n+2} (position n) is the capped top variable; anything beyond is illegal
        if poly.max_used_position() > n:
            raise ValueError(f"p_{q} uses variables beyond x{n + 2}")
        kept = {e: c for e, c in poly.terms() if len(e) <= n or e[n] == 0}
        return GradedPoly(VariableFamily.X, poly.nvars, kept).with_nvars(n)

    @classmethod
    def general(cls, n: int, delta: int, ps: Sequence[GradedPoly]) -> "AnsatzSpec":
        _check_delta(delta)
        if n < 0:
            raise ValueError("n must be nonnegative")
        if len(ps) != n + 1:
            raise ValueError(f"need the {n + 1} polynomials p_2..p_{n + 2}")
        capped = []
        for q, poly in enumerate(ps, start=2):
            if q <= n + 1 and poly.max_used_position() >= n:
                raise ValueError(f"p_{q} may only use x2..x{n + 1}")
            capped.append(cls._cap(poly, n, q))
        return cls(n=n, delta=delta, mode="general", ps=tuple(capped))

    @classmethod
    def reduced(cls, n: int, delta: int, top: GradedPoly) -> "AnsatzSpec":
        _check_delta(delta)
        if n < 1:
            raise ValueError("the reduced family needs n >= 1")
        if top.family not in (VariableFamily.X, VariableFamily.D):
            raise ValueError("P_n lives over the X (or D) family")
        if not top.is_homogeneous():
            raise ValueError("P_n must be homogeneous")
        if not top.is_zero and top.degree() != -2 * (n + 2):
            raise ValueError(f"P_n must have degree {-2 * (n + 2)}")
        if top.max_used_position() > n - 2:
            raise ValueError(f"P_n may only use x2..x{n}")
        if top.family is VariableFamily.D:
            top = GradedPoly(VariableFamily.X, top.nvars, dict(top.terms()))
        return cls(n=n, delta=delta, mode="reduced", top=top.with_nvars(max(n, top.nvars)))

    @classmethod
    def chain(cls, n: int, delta: int) -> "AnsatzSpec":
        """The reduced family with P_n = 0 (the closed-form families)."""
        return cls.reduced(n, delta, GradedPoly.zero(VariableFamily.X, 0)) if n >= 1 else cls.general(
            n, delta, [GradedPoly.zero(VariableFamily.X, 0)]
        )


def _phi_base(delta: int, n: int, p2: GradedPoly) -> list[GradedPoly]:
    one = GradedPoly.const(VariableFamily.X, n, 1)
    zero = GradedPoly.zero(VariableFamily.X, n)
    phi2 = (-2 * (1 + 2 * delta)) * p2.with_nvars(n)
    return [one, zero, phi2]


def _quadratic_factor(q: int, delta: int) -> Fraction:
    return Fraction((2 * q + delta - 3) * (2 * q + delta - 2), 2 * (1 + 2 * delta))


def general_phi_table(spec: AnsatzSpec, q_max: int) -> PhiTable:
    """Phi_k over the ansatz parameters for a general polynomial family.

    Phi_2 = -2(1+2 delta) p_2 and, for q >= 3,

        Phi_q = 2 sum_{k=2}^{n+1} p_{k+1} dPhi_{q-1}/dx_k
                + (2q+delta-3)(2q+delta-2) / (2(1+2 delta)) * Phi_2 Phi_{q-2}.
    """
    if spec.mode != "general":
        raise ValueError("general_phi_table needs a general-mode spec")
    if q_max < 2:
        raise ValueError("q_max must be at least 2")
    n, delta = spec.n, spec.delta
    entries = _phi_base(delta, n, spec.ps[0])
    for q in range(3, q_max + 1):
        adv = GradedPoly.zero(VariableFamily.X, n)
        for k in range(2, n + 2):
            d = entries[q - 1].partial(k)
            if d:
                adv = adv + spec.ps[k - 1] * d
        entries.append(2 * adv + _quadratic_factor(q, delta) * (entries[2] * entries[q - 2]))
    return PhiTable(delta, tuple(entries))


def reduced_phi_table(n: int, top: GradedPoly, delta: int, q_max: int) -> PhiTable:
    """Phi_k for the reduced chain family with top polynomial P_n.

    Same quadratic term as the general recursion; the advection part is
    the chain field  sum_{k=2}^{n} x_{k+1} d/dx_k + P_n d/dx_{n+1}.
    """
    spec = AnsatzSpec.reduced(n, delta, top)
    if q_max < 2:
        raise ValueError("q_max must be at least 2")
    x2 = GradedPoly.variable(VariableFamily.X, n, 2)
    entries = _phi_base(delta, n, x2)
    top = spec.top.with_nvars(n)
    for q in range(3, q_max + 1):
        adv = GradedPoly.zero(VariableFamily.X, n)
        for k in range(2, n + 1):
            d = entries[q - 1].partial(k)
            if d:
                adv = adv + GradedPoly.variable(VariableFamily.X, n, k + 1) * d
        d_top = entries[q - 1].partial(n + 1)
        if d_top:
            adv = adv + top * d_top
        entries.append(2 * adv + _quadratic_factor(q, delta) * (entries[2] * entries[q - 2]))
    return PhiTable(delta, tuple(entries))


def phi_table_for(spec: AnsatzSpec, q_max: int) -> PhiTable:
    if spec.mode == "general":
        return general_phi_table(spec, q_max)
    return reduced_phi_table(spec.n, spec.top, spec.delta, q_max)


def ansatz_to_jet(poly: GradedPoly, k_max: int) -> GradedPoly:
    """Substitute each ansatz parameter x_k by the chain polynomial D_{k-1}.

    ``poly`` may use x2..x_{k_max+1}; the result lives over jet variables
    y1..y_{k_max+1} and the graded degree is preserved.
    """
    if poly.family not in (VariableFamily.X, VariableFamily.D):
        raise ValueError("substitution expects an X- or D-family polynomial")
    if poly.max_used_position() > k_max - 1:
        raise ValueError(f"polynomial uses parameters beyond x{k_max + 1}")
    if k_max < 1:
        if poly.is_zero:
            return GradedPoly.zero(VariableFamily.Y, 1)
        return GradedPoly.const(VariableFamily.Y, 1, poly.coefficient((0,) * poly.nvars))
    chain = derivative_chain(k_max)
    ring = k_max + 1
    images = [chain[i].with_nvars(ring) for i in range(min(poly.nvars, k_max))]
    return poly.substitute(images, VariableFamily.Y, ring)


TimeFunction = Callable[[Numeric], Numeric]


def check_coefficient_recursion(
    coeffs: Sequence[tuple[TimeFunction, TimeFunction]],
    t_samples: Sequence[Numeric],
    tol: float = 0.0,
) -> bool:
    """Check psi_k(t) = 2 * psi_{k-1}'(t) at every sample.

    ``coeffs`` lists (value, derivative) callable pairs for psi_0, psi_1,
    and so on.  Exact values are compared exactly; floats within ``tol``.
    """
    for t in t_samples:
        for k in range(1, len(coeffs)):
            value = coeffs[k][0](t)
            target = 2 * coeffs[k - 1][1](t)
            if isinstance(value, float) or isinstance(target, float) or tol:
                if not math.isclose(float(value), float(target), rel_tol=0.0, abs_tol=tol or 1e-12):
                    return False
            elif value != target:
                return False
    return True
