"""Series solutions of the heat equation and their Burgers images.

A solution is assembled as

    psi(z, t) = exp(-h(t) z^2 / 2 + r(t)) *
                (z^delta + sum_{k>=2} Phi_k(x(t)) z^(2k+delta) / (2k+delta)!)

with r'(t) = -(delta + 1/2) h(t) and the parameters x(t) riding a heat
dynamical system.  For the built-in rational h family everything on the
series side is exact: coefficients, order-by-order heat residuals, the
Cole-Hopf image and its Burgers residual are all computed in rational
arithmetic.  Floats appear only in pointwise evaluation and in the
finite-difference residual checks.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .ansatz import AnsatzSpec, PhiTable, ansatz_to_jet, phi_table_for
from .dynsys import DynState, MobiusParam, PoleError, RationalH, Trajectory
from .grpoly import GradedPoly, Numeric, VariableFamily
from .operators import derivative_chain, jet_derivative

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class GridSpec:
    """Sample grid and stencil spacings for finite-difference residuals."""

    z0: float
    z1: float
    znum: int
    t0: float
    t1: float
    tnum: int
    dz: float
    dt: float

    def __post_init__(self):
        if self.znum < 1 or self.tnum < 1:
            raise ValueError("grid counts must be positive")
        if self.dz <= 0 or self.dt <= 0:
            raise ValueError("stencil spacings must be positive")

    def z_points(self) -> list[float]:
        if self.znum == 1:
            return [float(self.z0)]
        span = (self.z1 - self.z0) / (self.znum - 1)
        return [self.z0 + i * span for i in range(self.znum)]

    def t_points(self) -> list[float]:
        if self.tnum == 1:
            return [float(self.t0)]
        span = (self.t1 - self.t0) / (self.tnum - 1)
        return [self.t0 + i * span for i in range(self.tnum)]


def exp_r(h: RationalH, delta: int, r0: Union[Fraction, float], t: Numeric) -> float:
    """The closed-form prefactor e^{r(t)} solving r' = -(delta+1/2) h.

    e^{r} = e^{r0} * prod_{alpha_k != 0} (alpha_k/(alpha_k t - beta_k))^p
    with p = (delta + 1/2)/(n+1).  Only evaluated where every base is
    positive; other regions are rejected.
    """
    p = (delta + 0.5) / (h.n + 1)
    acc = math.exp(float(r0))
    for pole in h.poles:
        if pole.alpha:
            den = pole.alpha * t - pole.beta
            if den == 0:
                raise PoleError(f"profile pole at t = {t}")
            base = float(pole.alpha / den) if not isinstance(t, float) else float(pole.alpha) / float(den)
            if base <= 0:
                raise ValueError(f"fractional power of non-positive base at t = {t}")
            acc *= base**p
    return acc


class _TrajectoryInterp:
    """Linear interpolation over an integrated trajectory, plus the
    running trapezoid integral of x1 (for the r(t) exponent)."""

    def __init__(self, states: Sequence[DynState]) -> None:
        if len(states) < 2:
            raise ValueError("trajectory must contain at least two states")
        self.ts = [s.t for s in states]
        self.xs = [s.x for s in states]
        acc = [0.0]
        for i in range(1, len(states)):
            dt = self.ts[i] - self.ts[i - 1]
            acc.append(acc[-1] + dt * (self.xs[i][0] + self.xs[i - 1][0]) / 2)
        self.x1_integral = acc

    def _locate(self, t: float) -> int:
        if t < self.ts[0] - 1e-12 or t > self.ts[-1] + 1e-12:
            raise ValueError(f"t = {t} outside the integrated range")
        i = bisect_right(self.ts, t) - 1
        return min(max(i, 0), len(self.ts) - 2)

    def state(self, t: float) -> tuple:
        i = self._locate(t)
        w = (t - self.ts[i]) / (self.ts[i + 1] - self.ts[i])
        return tuple(a + w * (b - a) for a, b in zip(self.xs[i], self.xs[i + 1]))

    def integral_x1(self, t: float) -> float:
        i = self._locate(t)
        w = t - self.ts[i]
        x1a = self.xs[i][0]
        x1b = self.state(t)[0]
        return self.x1_integral[i] + w * (x1a + x1b) / 2


class SeriesSolution:
    """A truncated ansatz solution with an attached profile source.

    ``h_source`` is either a :class:`RationalH` (exact jets, closed-form
    prefactor) or an integrated trajectory (floats, interpolated).  The
    optional gauge is a pair (f, F) with F' = f; it multiplies psi by
    e^{-F(t)} and turns the target equation into psi_t = psi_zz/2 - f psi.
    """

    def __init__(
        self,
        delta: int,
        n: int,
        h_source: Union[RationalH, Sequence[DynState]],
        r0: Union[Fraction, float],
        phi: PhiTable,
        truncation: int,
        gauge: Union[tuple[Callable, Callable], None] = None,
    ) -> None:
        if truncation < 2:
            raise ValueError("truncation order must be at least 2")
        if len(phi.entries) < truncation + 1:
            raise ValueError("phi table shorter than the truncation order")
        self.delta = delta
        self.n = n
        self.h_source = h_source
        self.r0 = r0
        self.phi = phi
        self.truncation = truncation
        self.gauge = gauge
        self._interp = None if isinstance(h_source, RationalH) else _TrajectoryInterp(h_source)
        self._bracket_cache: Union[list[GradedPoly], None] = None

    # -- state access -------------------------------------------------------

    @property
    def exact(self) -> bool:
        return self._interp is None

    def jets(self, t: Numeric, m: int) -> tuple:
        if not self.exact:
            raise ValueError("exact jets need a rational profile source")
        return self.h_source.jets(t, m)

    def parameter_values(self, t: Numeric) -> tuple:
        """(x1, ..., x_{n+1}) at time t; x_{k+1} = D_k(jets) for exact sources."""
        if self.exact:
            jets = self.jets(t, self.n + 1)
            values = [jets[0]]
            if self.n:
                values += [d.evaluate(jets) for d in derivative_chain(self.n)]
            return tuple(values)
        return self._interp.state(float(t))

    def r_exponential(self, t: Numeric) -> float:
        """e^{r(t)} including the gauge factor, as a float."""
        if self.exact:
            value = exp_r(self.h_source, self.delta, self.r0, t)
        else:
            integral = self._interp.integral_x1(float(t))
            value = math.exp(float(self.r0) - (self.delta + 0.5) * integral)
        if self.gauge is not None:
            value *= math.exp(-float(self.gauge[1](t)))
        return value

    # -- series data --------------------------------------------------------

    def bracket_coefficients(self, t: Numeric) -> list:
        """b_k = psi_k(t) / e^{r(t)} for k = 0..K, exact for exact sources.

        b_k = (2k+delta)! * sum_{i+j=k} (-h/2)^i / i! * Phi_j(x) / (2j+delta)!.
        """
        xs = self.parameter_values(t)
        h = xs[0]
        phi_values = [entry.evaluate(xs[1:]) for entry in self.phi.entries[: self.truncation + 1]]
        d = self.delta
        out = []
        for k in range(self.truncation + 1):
            total = Fraction(0)
            for i in range(k + 1):
                j = k - i
                c = Fraction(math.factorial(2 * k + d), math.factorial(i) * math.factorial(2 * j + d))
                total = total + c * (-HALF) ** i * h**i * phi_values[j]
            out.append(total)
        return out

    def bracket_jets(self) -> list[GradedPoly]:
        """The b_k as jet polynomials (ansatz parameters substituted by
        chain polynomials), cached."""
        if self._bracket_cache is None:
            d = self.delta
            y1 = GradedPoly.variable(VariableFamily.Y, 1, 1)
            hat = [ansatz_to_jet(entry, max(self.n, 1)) for entry in self.phi.entries[: self.truncation + 1]]
            table = []
            for k in range(self.truncation + 1):
                acc = GradedPoly.zero(VariableFamily.Y, 1)
                for i in range(k + 1):
                    j = k - i
                    c = Fraction(math.factorial(2 * k + d), math.factorial(i) * math.factorial(2 * j + d))
                    acc = acc + (c * (-HALF) ** i) * (y1**i * hat[j])
                table.append(acc)
            self._bracket_cache = table
        return self._bracket_cache

    # -- evaluation ----------------------------------------------------------

    def bracket(self, z: float, t: Numeric) -> float:
        xs = self.parameter_values(t)
        d = self.delta
        acc = float(z) ** d
        zz = float(z) * float(z)
        for k in range(2, self.truncation + 1):
            phi_k = float(self.phi.entries[k].evaluate(xs[1:]))
            acc += phi_k * zz**k * float(z) ** d / math.factorial(2 * k + d)
        return acc

    def psi(self, z: float, t: Numeric) -> float:
        h = float(self.parameter_values(t)[0])
        return math.exp(-0.5 * h * float(z) ** 2) * self.r_exponential(t) * self.bracket(z, t)

    __call__ = psi

    def with_gauge(self, f: Callable, antiderivative: Callable) -> "SeriesSolution":
        if self.gauge is None:
            gauge = (f, antiderivative)
        else:
            old_f, old_g = self.gauge
            gauge = (lambda t: old_f(t) + f(t), lambda t: old_g(t) + antiderivative(t))
        return SeriesSolution(self.delta, self.n, self.h_source, self.r0, self.phi, self.truncation, gauge)


def assemble_psi(
    spec: AnsatzSpec,
    h_source: Union[RationalH, Sequence[DynState]],
    r0: Union[Fraction, float],
    truncation: int,
) -> SeriesSolution:
    """Build the truncated series solution for the given ansatz family.

    For a rational profile source the parameters are the chain values
    x_k(t) = D_{k-1}(jets); the caller guarantees the source actually
    solves the family's profile equation.
    """
    if truncation < 2:
        raise ValueError("truncation order must be at least 2")
    phi = phi_table_for(spec, truncation)
    return SeriesSolution(spec.delta, spec.n, h_source, r0, phi, truncation)


def gauge_transform(sol: SeriesSolution, f: Callable, antiderivative: Callable) -> SeriesSolution:
    """Multiply by e^{-F(t)} (F' = f): solves psi_t = psi_zz/2 - f psi.

    Only r(t) changes; the coefficient table and the Burgers image are
    untouched (the f-terms cancel in the bracket recursion).
    """
    return sol.with_gauge(f, antiderivative)


def rescale_to_mu(psi: Callable, mu: float) -> Callable:
    """Time-rescale a heat solution to the mu-diffusion equation.

    phi(z, t) = psi(z, 2 mu t) satisfies phi_t = mu phi_zz; mu = 1/2 is
    the identity.
    """
    if mu == 0:
        raise ValueError("mu must be nonzero")
    two_mu = 2 * mu
    if two_mu == 1:
        return psi
    return lambda z, t: psi(z, two_mu * t)


# -- residuals ----------------------------------------------------------------


def heat_residual_series(sol: SeriesSolution, t_samples: Sequence[Numeric]):
    """Max order-by-order heat defect |b_k + (2 delta+1) y1 b_{k-1} - 2 D b_{k-1}|
    over k <= K-1 and the samples; exactly zero iff the source profile
    solves the family equation there.

    This is psi_k - 2 psi_{k-1}' with the positive prefactor e^{r(t)}
    factored out, so it stays in rational arithmetic; the same check is
    valid for gauged solutions.
    """
    if not sol.exact:
        raise ValueError("the exact residual needs a rational profile source")
    table = sol.bracket_jets()
    d = sol.delta
    y1 = GradedPoly.variable(VariableFamily.Y, 1, 1)
    residual_polys = []
    depth = 0
    for k in range(1, sol.truncation):
        r = table[k] + (2 * d + 1) * (y1 * table[k - 1]) - 2 * jet_derivative(table[k - 1])
        residual_polys.append(r)
        depth = max(depth, r.max_used_position() + 1, k + 1)
    worst = Fraction(0)
    for t in t_samples:
        jets = sol.jets(t, depth)
        for r in residual_polys:
            value = abs(r.evaluate(jets))
            if value > worst:
                worst = value
    return worst


def diffusion_residual_numeric(
    psi: Callable,
    grid: GridSpec,
    mu: float = 0.5,
    loss: Union[Callable, None] = None,
) -> float:
    """Max |D_t psi - mu D_zz psi (+ f(t) psi)| by central differences."""
    worst = 0.0
    for t in grid.t_points():
        for z in grid.z_points():
            d_t = (psi(z, t + grid.dt) - psi(z, t - grid.dt)) / (2 * grid.dt)
            d_zz = (psi(z + grid.dz, t) - 2 * psi(z, t) + psi(z - grid.dz, t)) / (grid.dz * grid.dz)
            value = d_t - mu * d_zz
            if loss is not None:
                value += loss(t) * psi(z, t)
            if not math.isfinite(value):
                raise ValueError(f"non-finite residual at (z, t) = ({z}, {t})")
            worst = max(worst, abs(value))
    return worst


def heat_residual_numeric(psi: Callable, grid: GridSpec, loss: Union[Callable, None] = None) -> float:
    return diffusion_residual_numeric(psi, grid, 0.5, loss)


# -- Cole-Hopf ----------------------------------------------------------------


@dataclass(frozen=True)
class BurgersSolution:
    """The Cole-Hopf image v = -d/dz log psi of a series solution.

    v(z, t) = -delta/z + h(t) z - sum_{k>=2} c_k(t) z^(2k-1) where c_k is
    the z^(2k-1) coefficient of W'/W and W is the bracket series; the
    c_k are stored as jet polynomials (``series_jets[k]``), trusted
    through order 2K-1.  The normalized table entry is
    Psi_k = (2 delta k + 1) (2k-1)! c_k.
    """

    delta: int
    h_source: RationalH
    truncation: int
    series_jets: tuple[GradedPoly, ...]

    @property
    def pole_coefficient(self) -> int:
        """Coefficient of 1/z: 0 for even parity, -1 for odd."""
        return -self.delta

    def series_values(self, t: Numeric) -> list:
        jets = self.h_source.jets(t, self.truncation + 1)
        return [p.evaluate(jets) if not p.is_zero else Fraction(0) for p in self.series_jets]

    def normalized_coefficients(self, t: Numeric) -> list:
        """The Psi_k table at time t (entries 0 and 1 are zero)."""
        out = []
        for k, value in enumerate(self.series_values(t)):
            scale = (2 * self.delta * k + 1) * math.factorial(max(2 * k - 1, 0))
            out.append(scale * value)
        return out

    def v(self, z: float, t: Numeric) -> float:
        z = float(z)
        if z == 0 and self.delta:
            raise ZeroDivisionError("odd-parity Burgers image has a pole at z = 0")
        jets = self.h_source.jets(t, self.truncation + 1)
        acc = -self.delta / z if self.delta else 0.0
        acc += float(jets[0]) * z
        for k in range(2, self.truncation + 1):
            c = self.series_jets[k]
            if not c.is_zero:
                acc -= float(c.evaluate(jets)) * z ** (2 * k - 1)
        return acc

    __call__ = v


def cole_hopf(sol: SeriesSolution) -> BurgersSolution:
    """Exact Cole-Hopf image of a series solution (diffusion mu = 1/2).

    The removed-series coefficients come from truncated Laurent division:
    with W = 1 + sum_j W_j z^(2j) the image is
    v = -delta/z + h z - W'/W, computed term by term in jet polynomials.
    """
    if not sol.exact:
        raise ValueError("the exact Cole-Hopf image needs a rational profile source")
    K = sol.truncation
    d = sol.delta
    hat = [ansatz_to_jet(entry, max(sol.n, 1)) for entry in sol.phi.entries[: K + 1]]
    w = [p * Fraction(1, math.factorial(2 * j + d)) for j, p in enumerate(hat)]
    zero = GradedPoly.zero(VariableFamily.Y, 1)
    # u = 1/W truncated: u_m = -sum_{j>=1} w_j u_{m-j}
    u = [GradedPoly.const(VariableFamily.Y, 1, 1)]
    for m in range(1, K + 1):
        acc = zero
        for j in range(1, m + 1):
            if not w[j].is_zero and not u[m - j].is_zero:
                acc = acc - w[j] * u[m - j]
        u.append(acc)
    series = [zero, zero]
    for k in range(2, K + 1):
        acc = zero
        for j in range(1, k + 1):
            if not w[j].is_zero and not u[k - j].is_zero:
                acc = acc + (2 * j) * (w[j] * u[k - j])
        series.append(acc)
    return BurgersSolution(d, sol.h_source, K, tuple(series))


def burgers_residual(
    image: BurgersSolution,
    mu: Union[Fraction, float] = HALF,
    mode: str = "series",
    t_samples: Union[Sequence[Numeric], None] = None,
    grid: Union[GridSpec, None] = None,
):
    """Residual of v_t + v v_z = mu v_zz for a Cole-Hopf image.

    ``series`` mode expands the residual as an exact Laurent series in z
    (trusted through order 2K-3) and reports the max coefficient
    magnitude over the samples.  ``grid`` mode uses central differences
    on the evaluated v.
    """
    if mode == "series":
        if t_samples is None:
            raise ValueError("series mode needs t_samples")
        return _burgers_series_residual(image, Fraction(mu), t_samples)
    if mode == "grid":
        if grid is None:
            raise ValueError("grid mode needs a GridSpec")
        return _burgers_grid_residual(image, float(mu), grid)
    raise ValueError(f"unknown mode {mode!r}")


def _burgers_series_residual(image: BurgersSolution, mu: Fraction, t_samples: Sequence[Numeric]):
    K = image.truncation
    trusted = 2 * K - 3
    y1 = GradedPoly.variable(VariableFamily.Y, 1, 1)
    v: dict[int, GradedPoly] = {1: y1}
    if image.delta:
        v[-1] = GradedPoly.const(VariableFamily.Y, 1, -image.delta)
    for k in range(2, K + 1):
        if not image.series_jets[k].is_zero:
            v[2 * k - 1] = -image.series_jets[k]
    residual: dict[int, GradedPoly] = {}

    def add(order: int, poly: GradedPoly) -> None:
        if order > trusted or poly.is_zero:
            return
        residual[order] = residual.get(order, GradedPoly.zero(VariableFamily.Y, 1)) + poly

    for o, c in v.items():
        add(o, jet_derivative(c))
        add(o - 2, (-mu * o * (o - 1)) * c)
    for o1, c1 in v.items():
        for o2, c2 in v.items():
            add(o1 + o2 - 1, o2 * (c1 * c2))
    depth = max((p.max_used_position() + 1 for p in residual.values()), default=1)
    worst = Fraction(0)
    for t in t_samples:
        jets = image.h_source.jets(t, depth)
        for poly in residual.values():
            value = abs(poly.evaluate(jets))
            if value > worst:
                worst = value
    return worst


def _burgers_grid_residual(image: BurgersSolution, mu: float, grid: GridSpec) -> float:
    v = image.v
    worst = 0.0
    for t in grid.t_points():
        for z in grid.z_points():
            v_t = (v(z, t + grid.dt) - v(z, t - grid.dt)) / (2 * grid.dt)
            v_z = (v(z + grid.dz, t) - v(z - grid.dz, t)) / (2 * grid.dz)
            v_zz = (v(z + grid.dz, t) - 2 * v(z, t) + v(z - grid.dz, t)) / (grid.dz * grid.dz)
            value = v_t + v(z, t) * v_z - mu * v_zz
            if not math.isfinite(value):
                raise ValueError(f"non-finite residual at (z, t) = ({z}, {t})")
            worst = max(worst, abs(value))
    return worst


def residual_report(
    max_residual: Union[Fraction, float],
    mode: str,
    grid: Union[GridSpec, None] = None,
) -> str:
    """One-line JSON report of a residual check: {max_residual, grid, mode}.

    Floats are rendered with 17 significant digits so the report is
    byte-deterministic and round-trips exactly; ``grid`` is null for
    series-mode checks.
    """
    if mode not in ("series", "grid"):
        raise ValueError(f"unknown mode {mode!r}")
    if (grid is None) == (mode == "grid"):
        raise ValueError("grid mode needs a GridSpec and series mode forbids one")

    def f(v) -> str:
        return format(float(v), ".17g")

    if grid is None:
        grid_text = "null"
    else:
        grid_text = (
            f'{{"z0": {f(grid.z0)}, "z1": {f(grid.z1)}, "znum": {grid.znum}, '
            f'"t0": {f(grid.t0)}, "t1": {f(grid.t1)}, "tnum": {grid.tnum}, '
            f'"dz": {f(grid.dz)}, "dt": {f(grid.dt)}}}'
        )
    return f'{{"max_residual": {f(max_residual)}, "grid": {grid_text}, "mode": "{mode}"}}'


# -- closed forms --------------------------------------------------------------


def closed_form_0ansatz(delta: int, pole: MobiusParam, r0: Union[Fraction, float] = 0.0) -> Callable:
    """psi = (alpha/(alpha t - beta))^(1/2+delta) e^{-alpha z^2/(2(alpha t-beta)) + r0} z^delta."""
    if delta not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    a, b = float(pole.alpha), float(pole.beta)
    c0 = math.exp(float(r0))

    def psi(z: float, t: float) -> float:
        den = a * t - b
        if den == 0:
            raise PoleError(f"pole at t = {t}")
        base = a / den
        if base <= 0:
            raise ValueError(f"fractional power of non-positive base at t = {t}")
        value = base ** (0.5 + delta) * math.exp(-a * z * z / (2 * den)) * c0
        return value * z if delta else value

    return psi


def gamma_ratio_coeff(m: int, delta: int) -> Fraction:
    """Gamma(3/4 + delta/2) / (m! Gamma(m + 3/4 + delta/2)) as an exact rational."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if delta not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    value = Fraction(1, math.factorial(m))
    base = Fraction(3, 4) + Fraction(delta, 2)
    for j in range(m):
        value /= base + j
    return value


def closed_form_1ansatz(
    delta: int,
    pole1: MobiusParam,
    pole2: MobiusParam,
    r0: Union[Fraction, float] = 0.0,
) -> Callable:
    """Two-pole closed form: Gaussian factor times the ratio-coefficient series.

    psi = prod_{alpha_k != 0} (alpha_k/(alpha_k t - beta_k))^((1+2 delta)/4)
          * exp(-z^2/4 * sum_k alpha_k/(alpha_k t - beta_k) + r0)
          * z^delta * sum_m gamma_m (-1)^m x2(t)^m (z/2)^(4m)

    with x2(t) = -(A - B)^2/4 for the two summands A, B of 2h: the chain
    value D_1 = h' + h^2 of the profile.
    """
    if delta not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    poles = (pole1, pole2)
    c0 = math.exp(float(r0))
    p = (1 + 2 * delta) / 4

    def psi(z: float, t: float) -> float:
        summands = []
        for pole in poles:
            den = float(pole.alpha) * t - float(pole.beta)
            if den == 0:
                raise PoleError(f"pole at t = {t}")
            summands.append(float(pole.alpha) / den)
        prefactor = c0
        for s, pole in zip(summands, poles):
            if pole.alpha:
                if s <= 0:
                    raise ValueError(f"fractional power of non-positive base at t = {t}")
                prefactor *= s**p
        x2 = -0.25 * (summands[0] - summands[1]) ** 2
        u = (-x2) * (z / 2) ** 4
        term, acc, m = 1.0, 1.0, 0
        while m < 400:
            m += 1
            term *= u / (m * (m - 0.25 + 0.5 * delta))
            acc += term
            if term <= 1e-17 * abs(acc):
                break
        value = prefactor * math.exp(-(z * z) / 4 * (summands[0] + summands[1])) * acc
        return value * z if delta else value

    return psi
