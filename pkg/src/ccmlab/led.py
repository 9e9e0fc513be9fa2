"""LED transfer curves and their Gaussian-input baseband statistics.

An LED is a memoryless polynomial curve between a turn-on knee and a
saturation point, clipped to its output range. Biased at beta_dc it acts on
the zero-mean multiplex as a shifted nonlinearity; under a Gaussian drive
that device splits into a linear gain C plus uncorrelated distortion noise
(Bussgang decomposition), which is all the detector and the analytic bound
ever see of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.special import erfc

DEFAULT_SAMPLE_POWER = (256 - 2) / 256  # multiplex power for unit-power bins


@dataclass(frozen=True)
class LedTransfer:
    """Forward curve y = F(x): polynomial on [x_cut, x_sat], clipped outside.

    coeffs are ascending powers. F must be nondecreasing on the active span
    and meet the clip rails near its ends; the DC bias must sit inside the
    span.
    """

    coeffs: tuple[float, ...]
    x_cut: float
    x_sat: float
    y_min: float
    y_max: float
    beta_dc: float

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.x_cut < self.beta_dc < self.x_sat:
            raise ValueError("need x_cut < beta_dc < x_sat")
        if not self.y_min < self.y_max:
            raise ValueError("need y_min < y_max")
        span = np.linspace(self.x_cut, self.x_sat, 1001)
        y = npoly.polyval(span, self.coeffs)
        if np.any(np.diff(y) < -1e-9):
            raise ValueError("curve must be nondecreasing over [x_cut, x_sat]")
        rail_tol = 1e-3 * (self.y_max - self.y_min)
        if abs(y[0] - self.y_min) > rail_tol or abs(y[-1] - self.y_max) > rail_tol:
            raise ValueError("curve must meet the clip rails at x_cut and x_sat")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        y = npoly.polyval(np.clip(x, self.x_cut, self.x_sat), self.coeffs)
        return np.clip(y, self.y_min, self.y_max)


def reference_led() -> LedTransfer:
    """The bundled cubic: quiet knee at 0.1, saturation at 1.0, bias 0.55."""
    return LedTransfer(
        coeffs=(0.0239, -0.4938, 2.7160, -1.6461),
        x_cut=0.1,
        x_sat=1.0,
        y_min=0.0,
        y_max=0.6,
        beta_dc=0.55,
    )


def ideal_predistortion(led: LedTransfer) -> LedTransfer:
    """Composite curve of a perfectly predistorted LED.

    The predistorter inverts the polynomial inside the span, leaving a pure
    ramp from (x_cut, y_min) up to (x_sat - x_cut, y_max); the span shrinks
    by x_cut because the inverter cannot push the drive past the physical
    saturation input.
    """
    slope = (led.y_max - led.y_min) / (led.x_sat - 2 * led.x_cut)
    return LedTransfer(
        coeffs=(led.y_min - slope * led.x_cut, slope),
        x_cut=led.x_cut,
        x_sat=led.x_sat - led.x_cut,
        y_min=led.y_min,
        y_max=led.y_max,
        beta_dc=led.beta_dc,
    )


def ibo_to_rho(ibo_db: float, sample_power: float = DEFAULT_SAMPLE_POWER) -> float:
    """Drive scale for a given input back-off of the unit-normalized multiplex."""
    return 10.0 ** (-ibo_db / 20.0) / math.sqrt(sample_power)


@dataclass(frozen=True)
class ShiftedNonlinearity:
    """The LED as seen by the zero-mean drive signal x.

    z = poly(x) for lam_lo <= x <= lam_hi, else the clip constants. coeffs
    already absorb the drive scale rho (kept as back_off for bookkeeping).
    """

    coeffs: tuple[float, ...]
    lam_lo: float
    lam_hi: float
    clip_lo: float
    clip_hi: float
    back_off: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.lam_lo < 0.0 < self.lam_hi:
            raise ValueError("thresholds must straddle zero")

    @property
    def symmetric(self) -> bool:
        """True when the clip thresholds are symmetric about zero."""
        return abs(self.lam_hi + self.lam_lo) <= 1e-12 * self.lam_hi

    def apply(self, x):
        x = np.asarray(x, dtype=float)
        y = npoly.polyval(x, self.coeffs)
        y = np.where(x < self.lam_lo, self.clip_lo, y)
        return np.where(x > self.lam_hi, self.clip_hi, y)


def recenter(
    led: LedTransfer, ibo_db: float, sample_power: float = DEFAULT_SAMPLE_POWER
) -> ShiftedNonlinearity:
    """Shift an LED to its bias point and fold in the drive scale.

    Exact polynomial recomposition: with v = beta + rho*x,
    F(v) - F(beta) = sum_l b_l rho^l x^l where
    b_l = sum_{k>=l} c_k C(k, l) beta^(k-l).
    """
    rho = ibo_to_rho(ibo_db, sample_power)
    beta = led.beta_dc
    c = led.coeffs
    deg = len(c) - 1
    b = [
        sum(c[k] * comb(k, l) * beta ** (k - l) for k in range(l, deg + 1))
        for l in range(deg + 1)
    ]
    y0 = b[0]  # = F(beta)
    coeffs = tuple((b[l] * rho**l if l else 0.0) for l in range(deg + 1))
    return ShiftedNonlinearity(
        coeffs=coeffs,
        lam_lo=(led.x_cut - beta) / rho,
        lam_hi=(led.x_sat - beta) / rho,
        clip_lo=led.y_min - y0,
        clip_hi=led.y_max - y0,
        back_off=rho,
    )


@dataclass(frozen=True)
class BussgangStats:
    gain: float  # linear gain C
    out_power: float  # E[Z^2]
    distortion_var: float  # E[Z^2] - E[Z]^2 - C^2 var
    input_var: float
    out_mean: float


def _stats(exz: float, ez: float, ez2: float, var: float) -> BussgangStats:
    gain = exz / var
    dist = ez2 - ez * ez - gain * gain * var
    return BussgangStats(gain, ez2, max(dist, 0.0), var, ez)


def bussgang_closed_form(nl: ShiftedNonlinearity, input_var: float) -> BussgangStats:
    """Exact output statistics for symmetric clip thresholds.

    Uses the interior Gaussian moment recurrence
    I_j = -2 var lam^(j-1) pdf + (j-1) var I_(j-2) (odd moments vanish);
    the clip constants may differ, only the thresholds must match.
    """
    if not nl.symmetric:
        raise ValueError("closed form needs symmetric thresholds; use the numeric route")
    lam = nl.lam_hi
    var = float(input_var)
    sd = math.sqrt(var)
    pdf = math.exp(-lam * lam / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)
    q_t = 0.5 * erfc(lam / (math.sqrt(2.0) * sd))
    a = nl.coeffs
    deg = len(a) - 1
    need = 2 * deg
    interior = [0.0] * (need + 2)
    interior[0] = 1.0 - 2.0 * q_t
    for j in range(2, need + 2, 2):
        interior[j] = -2.0 * var * lam ** (j - 1) * pdf + (j - 1) * var * interior[j - 2]
    m1 = var * pdf
    c_u, c_d = nl.clip_hi, nl.clip_lo
    exz = (c_u - c_d) * m1 + sum(a[l] * interior[l + 1] for l in range(deg + 1))
    ez = (c_u + c_d) * q_t + sum(a[l] * interior[l] for l in range(deg + 1))
    ez2 = (c_u * c_u + c_d * c_d) * q_t + sum(
        a[l] * a[k] * interior[l + k] for l in range(deg + 1) for k in range(deg + 1)
    )
    return _stats(exz, ez, ez2, var)


def _upper_tail(lam: float, var: float, kmax: int) -> list[float]:
    # T_k = E[x^k; x > lam] for x ~ N(0, var), lam > 0
    sd = math.sqrt(var)
    pdf = math.exp(-lam * lam / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)
    t = [0.0] * (kmax + 1)
    t[0] = 0.5 * erfc(lam / (math.sqrt(2.0) * sd))
    if kmax >= 1:
        t[1] = var * pdf
    for k in range(2, kmax + 1):
        t[k] = lam ** (k - 1) * var * pdf + (k - 1) * var * t[k - 2]
    return t


def bussgang_numeric(
    nl: ShiftedNonlinearity, input_var: float, nodes: int = 240
) -> BussgangStats:
    """Output statistics for arbitrary thresholds.

    Gauss-Hermite quadrature integrates the polynomial branch over the whole
    line (exact once nodes exceed the degree); closed-form tail moments then
    swap the overhang beyond each threshold for the clip constants.
    """
    var = float(input_var)
    t_nodes, t_w = np.polynomial.hermite.hermgauss(nodes)
    x = math.sqrt(2.0 * var) * t_nodes
    w = t_w / math.sqrt(math.pi)
    a = np.array(nl.coeffs)
    p = npoly.polyval(x, a)
    gh_z = float(np.dot(w, p))
    gh_xz = float(np.dot(w, x * p))
    gh_z2 = float(np.dot(w, p * p))

    lam_u = nl.lam_hi
    lam_d = -nl.lam_lo  # magnitude of the lower threshold
    pp = npoly.polymul(a, a)
    kmax = len(pp)  # highest moment needed is deg(p^2) + 0 and deg(p) + 1
    up = _upper_tail(lam_u, var, kmax)
    dn = _upper_tail(lam_d, var, kmax)

    def overhang(coefs, r):
        # E[poly(x) x^r] beyond both thresholds; lower tail via sign flip
        s = 0.0
        for l, cl in enumerate(coefs):
            s += cl * up[l + r] + cl * (-1.0) ** (l + r) * dn[l + r]
        return s

    c_u, c_d = nl.clip_hi, nl.clip_lo
    ez = gh_z - overhang(a, 0) + c_u * up[0] + c_d * dn[0]
    exz = gh_xz - overhang(a, 1) + c_u * up[1] - c_d * dn[1]
    ez2 = gh_z2 - overhang(pp, 0) + c_u * c_u * up[0] + c_d * c_d * dn[0]
    return _stats(exz, ez, ez2, var)


def characterize(
    led: LedTransfer,
    ibo_db: float,
    sample_power: float = DEFAULT_SAMPLE_POWER,
) -> tuple[ShiftedNonlinearity, BussgangStats]:
    """Recenter an LED at a given back-off and summarize it for the detector."""
    nl = recenter(led, ibo_db, sample_power)
    if nl.symmetric:
        return nl, bussgang_closed_form(nl, sample_power)
    return nl, bussgang_numeric(nl, sample_power)


def noise_var(gain: float, sym_power: float, ebn0_db: float) -> float:
    """Per-dimension subcarrier noise variance at a target Eb/N0."""
    if math.isinf(ebn0_db):
        return 0.0
    return gain * gain * sym_power / (2.0 * 10.0 ** (ebn0_db / 10.0))


def equivalent_ebn0_db(
    gain: float, sym_power: float, distortion_var: float, noise_var: float
) -> float:
    """Eb/N0 after lumping distortion with the channel noise."""
    den = distortion_var + noise_var
    if den <= 0.0:
        return math.inf
    return 10.0 * math.log10(gain * gain * sym_power / (2.0 * den))


_LED_FIELDS = ("coeffs", "x_cut", "x_sat", "y_min", "y_max", "beta_dc")


def save_led(path, led: LedTransfer) -> None:
    with open(path, "w") as fh:
        fh.write("coeffs = " + ", ".join(f"{c:.15g}" for c in led.coeffs) + "\n")
        for name in _LED_FIELDS[1:]:
            fh.write(f"{name} = {getattr(led, name):.15g}\n")


def load_led(path) -> LedTransfer:
    fields = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _LED_FIELDS:
                raise ValueError(f"unknown field {key!r}")
            if key == "coeffs":
                fields[key] = tuple(float(v) for v in value.split(","))
            else:
                fields[key] = float(value)
    missing = [f for f in _LED_FIELDS if f not in fields]
    if missing:
        raise ValueError(f"missing fields: {', '.join(missing)}")
    return LedTransfer(**fields)
