"""Physical parameters, computational grid, and wall-profile containers.

The state variable is the in-plane rotation angle theta(x), in radians,
connecting pi - theta_h at x = -inf to theta_h at x = +inf, where
theta_h = arcsin(h). Profiles are sampled on a uniform symmetric grid with
x = 0 a node, so that the pinning theta(0) = pi/2 can be imposed exactly.
Beyond the grid, profiles are extended by their boundary values, which makes
u = sin(theta) - h extend by zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MultipleCrossingsError, NoCrossingError

__all__ = [
    "ModelParams",
    "Grid",
    "WallProfile",
    "EnergyBreakdown",
    "make_params",
    "make_grid",
    "make_initial_profile",
    "recenter",
    "reflect_compose",
    "boundary_slack",
    "save_profile",
    "load_profile",
]


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless magnetostatic strength nu, applied field h, and the
    tilted vacuum angle theta_h = arcsin(h)."""

    nu: float
    h: float
    theta_h: float


@dataclass(frozen=True)
class Grid:
    """Uniform node-centered grid on [-L, L] with an odd number of points."""

    n: int
    half_width: float
    spacing: float
    nodes: np.ndarray = field(compare=False, repr=False)

    @property
    def center_index(self) -> int:
        return self.n // 2


@dataclass(frozen=True)
class WallProfile:
    """Sampled angle field theta on a grid, tied to its model parameters."""

    grid: Grid
    theta: np.ndarray
    params: ModelParams

    def with_theta(self, theta: np.ndarray) -> "WallProfile":
        return WallProfile(self.grid, np.asarray(theta, dtype=float), self.params)


@dataclass(frozen=True)
class EnergyBreakdown:
    """Exchange, anisotropy/Zeeman (potential), and stray-field energy parts."""

    exchange: float
    potential: float
    stray: float
    total: float

    def as_dict(self) -> dict:
        return {
            "exchange": self.exchange,
            "potential": self.potential,
            "stray": self.stray,
            "total": self.total,
        }


def make_params(nu: float, h: float) -> ModelParams:
    """Validate (nu, h) and derive theta_h = arcsin(h).

    Two distinct vacua of the energy exist only for |h| < 1; we restrict to
    0 <= h < 1.
    """
    if nu < 0:
        raise ValueError(f"nu must be nonnegative (got {nu})")
    if not (0.0 <= h < 1.0):
        raise ValueError(f"h must lie in [0, 1) (got {h})")
    return ModelParams(nu=float(nu), h=float(h), theta_h=math.asin(h))


def make_grid(n: int, half_width: float) -> Grid:
    """Build a uniform symmetric grid; n must be odd so x = 0 is a node."""
    if n < 16:
        raise ValueError(f"grid needs at least 16 points (got {n})")
    if n % 2 == 0:
        raise ValueError(f"grid point count must be odd (got {n})")
    if half_width <= 0:
        raise ValueError(f"half_width must be positive (got {half_width})")
    nodes = np.linspace(-half_width, half_width, n)
    # enforce exact symmetry about 0 against linspace roundoff
    nodes = 0.5 * (nodes - nodes[::-1])
    nodes[n // 2] = 0.0
    return Grid(n=n, half_width=float(half_width), spacing=float(nodes[1] - nodes[0]), nodes=nodes)


def boundary_slack(params: ModelParams) -> float:
    """Default admissibility slack eps_bc = 1e-3 * (pi - 2 theta_h)."""
    return 1e-3 * (math.pi - 2.0 * params.theta_h)


def _template(x: np.ndarray, params: ModelParams) -> np.ndarray:
    """Smooth monotone ramp matching the constants of eta-type comparison
    profiles: pi - theta_h for x < -1, theta_h for x > 1, pi/2 at 0."""
    th = params.theta_h
    ramp = np.clip(x, -1.0, 1.0)
    frac = 0.5 * (1.0 - np.sin(0.5 * math.pi * ramp))
    return th + (math.pi - 2.0 * th) * frac


def _kink(x: np.ndarray, params: ModelParams, width: float) -> np.ndarray:
    th = params.theta_h
    return th + (math.pi - 2.0 * th) * (2.0 / math.pi) * np.arctan(np.exp(-x / width))


def make_initial_profile(
    grid: Grid,
    params: ModelParams,
    kind: str = "template",
    width: float = 1.0,
    amplitude: float = 0.1,
    bump_radius: float = 5.0,
    seed: int = 0,
) -> WallProfile:
    """Build an admissible starting profile.

    kind:
      * ``template``  -- smooth monotone ramp, constant outside [-1, 1].
      * ``kink``      -- arctan profile of the given width.
      * ``perturbed`` -- kink plus a compactly supported even bump with
        seeded random cosine coefficients, clamped to [theta_h, pi-theta_h].
    """
    x = grid.nodes
    th = params.theta_h
    if kind == "template":
        theta = _template(x, params)
    elif kind == "kink":
        if width <= 0:
            raise ValueError("kink width must be positive")
        theta = _kink(x, params, width)
    elif kind == "perturbed":
        if width <= 0:
            raise ValueError("kink width must be positive")
        theta = _kink(x, params, width)
        rng = np.random.default_rng(seed)
        coeffs = rng.uniform(-1.0, 1.0, size=3)
        r = np.clip(np.abs(x) / bump_radius, 0.0, 1.0)
        window = np.cos(0.5 * math.pi * r) ** 2
        bump = np.zeros_like(x)
        for j, c in enumerate(coeffs):
            bump += c * np.cos((j + 1) * math.pi * np.abs(x) / bump_radius)
        theta = theta + amplitude * window * bump / max(1.0, np.abs(coeffs).sum())
        theta = np.clip(theta, th, math.pi - th)
    else:
        raise ValueError(f"unknown profile kind {kind!r}")
    theta[0] = math.pi - th
    theta[-1] = th
    return WallProfile(grid=grid, theta=theta, params=params)


def _crossing_locations(x: np.ndarray, z: np.ndarray) -> list[float]:
    """Locations where z changes sign (z = theta - pi/2), by linear
    interpolation; a zero at a node counts as a crossing at that node."""
    locs: list[float] = []
    i = 0
    n = len(z)
    while i < n:
        if z[i] == 0.0:
            j = i
            while j + 1 < n and z[j + 1] == 0.0:
                j += 1
            locs.append(0.5 * (x[i] + x[j]))
            i = j + 1
            continue
        if i + 1 < n and z[i] * z[i + 1] < 0.0:
            s = x[i] + (x[i + 1] - x[i]) * z[i] / (z[i] - z[i + 1])
            locs.append(s)
        i += 1
    return locs


def recenter(p: WallProfile) -> WallProfile:
    """Translate the profile so theta(0) = pi/2, by linear-interpolation
    resampling with constant extension at the exposed edge."""
    x = p.grid.nodes
    z = p.theta - 0.5 * math.pi
    locs = _crossing_locations(x, z)
    if len(locs) == 0:
        raise NoCrossingError("theta - pi/2 never changes sign")
    if len(locs) > 1:
        raise MultipleCrossingsError(
            f"theta - pi/2 changes sign {len(locs)} times; expected once"
        )
    shift = locs[0]
    if shift == 0.0:
        return p
    theta = np.interp(x + shift, x, p.theta, left=p.theta[0], right=p.theta[-1])
    return p.with_theta(theta)


def reflect_compose(p: WallProfile) -> WallProfile:
    """Return the reflected-composed profile x -> pi - theta(-x)."""
    return p.with_theta(math.pi - p.theta[::-1])


def save_profile(path, p: WallProfile) -> None:
    """Write a profile as two-column text with a parameter header.

    Values are written with 17 significant digits so that the round trip is
    bit exact.
    """
    g, m = p.grid, p.params
    lines = [f"# nu={m.nu:.17g} h={m.h:.17g} n={g.n:d} L={g.half_width:.17g}\n"]
    for xi, ti in zip(g.nodes, p.theta):
        lines.append(f"{xi:.17g} {ti:.17g}\n")
    with open(path, "w") as fh:
        fh.writelines(lines)


def load_profile(path) -> WallProfile:
    """Read a profile written by :func:`save_profile`."""
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise ValueError("profile file missing parameter header")
        fields = dict(tok.split("=", 1) for tok in header[1:].split())
        nu = float(fields["nu"])
        h = float(fields["h"])
        n = int(fields["n"])
        half_width = float(fields["L"])
        data = np.loadtxt(fh)
    if data.shape != (n, 2):
        raise ValueError(f"expected {n} rows of (x, theta), got shape {data.shape}")
    grid = make_grid(n, half_width)
    params = make_params(nu, h)
    return WallProfile(grid=grid, theta=data[:, 1].copy(), params=params)
