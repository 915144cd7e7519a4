"""Simulation parameters: model variants, validation, and INI parsing.

The config file is flat key=value INI text with '#' comments and sections
[model], [grid], [anisotropy], [ic], [solver], [output] plus an optional
[expert] section for the fixed constants omega and mu.  See the README for
the full key list.
"""
from __future__ import annotations

import configparser
import math
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .material import MU, OMEGA_DW


class ConfigError(ValueError):
    """One or more configuration invariants are violated."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class VariantKind(Enum):
    DCH = "dch"
    DDCH_VARIATIONAL = "ddch"
    RRV = "rrv"
    CH_CLASSICAL = "ch"


class AnisotropyMode(Enum):
    ISOTROPIC = "isotropic"
    WEAK = "weak"
    STRONG = "strong"


class BoundaryKind(Enum):
    PERIODIC = "periodic"
    ZERO_FLUX = "zero_flux"


class AnisotropyKind(Enum):
    ISOTROPIC = "isotropic"
    FOURFOLD_2D = "fourfold2d"
    FOURFOLD_3D = "fourfold3d"
    MULTIWELL = "multiwell"


class ICKind(Enum):
    CIRCLE = "circle"
    SPHERE = "sphere"
    STAR = "star"
    FLAT = "flat"
    TANH_1D = "tanh1d"
    RANDOM_SPINODAL = "random_spinodal"
    FIELD_FILE = "field_file"


FOURFOLD_CONVEXITY_LIMIT = 1.0 / 15.0


@dataclass(frozen=True)
class ModelVariant:
    kind: VariantKind = VariantKind.DDCH_VARIATIONAL
    anisotropy_mode: AnisotropyMode = AnisotropyMode.ISOTROPIC


@dataclass(frozen=True)
class Well:
    m: tuple[float, float, float]
    rho: float
    omega: float


@dataclass(frozen=True)
class AnisotropySpec:
    kind: AnisotropyKind = AnisotropyKind.ISOTROPIC
    C: float = 0.0
    gamma0: float = 1.0
    rho_bar: float = 0.0
    wells: tuple[Well, ...] = ()

    def is_convex_fourfold(self) -> bool:
        """Stability 1 - 15 C cos(4 theta) > 0 for all theta iff C < 1/15."""
        return self.C < FOURFOLD_CONVEXITY_LIMIT


@dataclass(frozen=True)
class InitialConditionSpec:
    kind: ICKind = ICKind.CIRCLE
    radius: float = 0.5
    amplitude: float = 0.0      # star lobe amplitude a in r0 (1 + a cos(k phi))
    lobes: int = 4              # star lobe count k
    center: tuple[float, ...] | None = None
    width: float = 1.0          # flat strip width
    x0: float = 0.0             # tanh1d interface position
    noise_amplitude: float = 0.05
    path: str = ""              # field_file source


@dataclass(frozen=True)
class SimConfig:
    variant: ModelVariant = field(default_factory=ModelVariant)
    epsilon: float = 0.2
    alpha: float = 1e-6
    beta: float = 0.0
    p: float = 1.0
    xi: float | None = None
    omega_dw: float = OMEGA_DW
    mu: float = MU
    tau: float = 2e-5
    n_steps: int = 0
    extent: tuple[float, ...] = (2.0, 2.0)
    cells: tuple[int, ...] = (64, 64)
    bc: BoundaryKind = BoundaryKind.PERIODIC
    anisotropy: AnisotropySpec = field(default_factory=AnisotropySpec)
    ic: InitialConditionSpec = field(default_factory=InitialConditionSpec)
    solver_tol: float = 1e-9
    solver_maxiter: int = 2000
    solver_ell: int = 2
    equilibrium_tol: float = 1e-4
    output_dir: str = "out"
    output_every: int = 0       # snapshot cadence in steps; 0 = start/end only
    rng_seed: int = 0
    validated: bool = False

    @property
    def dim(self) -> int:
        return len(self.cells)

    @property
    def h(self) -> tuple[float, ...]:
        return tuple(L / n for L, n in zip(self.extent, self.cells))


def xi_of_p(p: float) -> float:
    """Normalization xi = 6 Gamma(2-p)^2 / Gamma(4-2p), defined for 0 <= p < 2."""
    if not 0.0 <= p < 2.0:
        raise ValueError(f"xi_of_p requires 0 <= p < 2 (Gamma pole), got p={p}")
    return 6.0 * math.gamma(2.0 - p) ** 2 / math.gamma(4.0 - 2.0 * p)


def _normalized_wells(wells, errors):
    out = []
    for w in wells:
        m = np.asarray(w.m, dtype=float)
        nrm = float(np.linalg.norm(m))
        if nrm == 0.0:
            errors.append("anisotropy.wells: zero direction vector")
            continue
        if abs(nrm - 1.0) > 1e-12:
            m = m / nrm
        if w.rho < 0.0:
            errors.append("anisotropy.wells: rho must be nonnegative")
        if w.omega <= 0.0:
            errors.append("anisotropy.wells: omega must be positive")
        out.append(Well(tuple(float(v) for v in m), float(w.rho), float(w.omega)))
    return tuple(out)


def validate(config: SimConfig) -> SimConfig:
    """Check every invariant, fill derived quantities, return the validated copy.

    Raises ConfigError listing every violated invariant by key name.
    Idempotent: validate(validate(c)) == validate(c).
    """
    errors: list[str] = []
    c = config

    if c.epsilon <= 0.0:
        errors.append("model.epsilon must be positive")
    if c.alpha < 0.0:
        errors.append("model.alpha must be nonnegative")
    if c.tau <= 0.0:
        errors.append("model.tau must be positive")
    if c.n_steps < 0:
        errors.append("model.n_steps must be nonnegative")
    if c.omega_dw <= 0.0:
        errors.append("expert.omega must be positive")
    if c.mu <= 0.0:
        errors.append("expert.mu must be positive")
    if c.dim not in (2, 3):
        errors.append("grid.cells must give a 2D or 3D grid")
    if len(c.extent) != len(c.cells):
        errors.append("grid.extent and grid.cells must have equal length")
    if any(n < 1 for n in c.cells):
        errors.append("grid.cells must be positive")
    if any(L <= 0.0 for L in c.extent):
        errors.append("grid.extent must be positive")
    if c.solver_tol <= 0.0:
        errors.append("solver.tol must be positive")
    if c.solver_maxiter < 1:
        errors.append("solver.maxiter must be positive")
    if c.solver_ell < 1:
        errors.append("solver.ell must be at least 1")

    kind = c.variant.kind
    mode = c.variant.anisotropy_mode
    p, xi, beta = c.p, c.xi, c.beta

    if mode is AnisotropyMode.STRONG:
        if beta <= 0.0:
            errors.append("model.beta must be positive for strong anisotropy")
    elif beta != 0.0:
        errors.append("model.beta must be zero for weak/isotropic anisotropy")

    if mode is AnisotropyMode.ISOTROPIC:
        if c.anisotropy.kind is not AnisotropyKind.ISOTROPIC:
            errors.append("anisotropy.kind must be isotropic in isotropic mode")
    elif c.anisotropy.kind is AnisotropyKind.ISOTROPIC:
        errors.append("anisotropy.kind must be anisotropic in weak/strong mode")

    if kind in (VariantKind.DCH, VariantKind.CH_CLASSICAL):
        # forced: p = 0, xi = 1 (g identically 1)
        p, xi = 0.0, 1.0
    elif kind is VariantKind.DDCH_VARIATIONAL:
        if not 0.0 <= p < 2.0:
            errors.append("model.p must satisfy 0 <= p < 2 for the variational model")
        elif xi is None:
            xi = xi_of_p(p)
    elif kind is VariantKind.RRV:
        if p not in (1.0, 2.0):
            errors.append("model.p must be 1 or 2 for the RRV model")
        elif xi is None:
            xi = 6.0 if p == 1.0 else 30.0
    if xi is not None and xi <= 0.0:
        errors.append("model.xi must be positive")

    aniso = replace(c.anisotropy, wells=_normalized_wells(c.anisotropy.wells, errors))
    if aniso.kind is AnisotropyKind.MULTIWELL and not aniso.wells:
        errors.append("anisotropy.wells required for multiwell kind")
    if aniso.kind is AnisotropyKind.FOURFOLD_2D and c.dim != 2:
        errors.append("anisotropy.kind fourfold2d requires a 2D grid")
    if aniso.gamma0 <= 0.0:
        errors.append("anisotropy.gamma0 must be positive")

    if errors:
        raise ConfigError(errors)

    for L, n in zip(c.extent, c.cells):
        if n > 1:  # skip quasi-1D padding axes
            h = L / n
            if not (5.0 * h <= c.epsilon <= 10.0 * h):
                warnings.warn(
                    f"resolution band violated: 5h={5 * h:g}, eps={c.epsilon:g}, "
                    f"10h={10 * h:g} (want 5h <= eps <= 10h)",
                    stacklevel=2,
                )

    return replace(c, p=p, xi=xi, anisotropy=aniso, validated=True)


# ---------------------------------------------------------------------------
# INI parsing

def _parse_wells(text: str) -> tuple[Well, ...]:
    """Parse ';'-separated wells, each 'mx my mz rho omega' (2D: 'mx my rho omega')."""
    wells = []
    for chunk in text.split(";"):
        tokens = chunk.split()
        if not tokens:
            continue
        vals = [float(t) for t in tokens]
        if len(vals) == 5:
            m = (vals[0], vals[1], vals[2])
        elif len(vals) == 4:
            m = (vals[0], vals[1], 0.0)
        else:
            raise ConfigError(f"anisotropy.wells: expected 4 or 5 numbers per well, got {chunk!r}")
        wells.append(Well(m, vals[-2], vals[-1]))
    return tuple(wells)


def _tuple_of(cast, text):
    return tuple(cast(t) for t in text.split())


def _enum(enum_cls, text, key):
    try:
        return enum_cls(text.strip().lower())
    except ValueError:
        choices = ", ".join(e.value for e in enum_cls)
        raise ConfigError(f"{key}: unknown value {text!r} (choices: {choices})") from None


def parse_config(path: str, overrides: dict[str, str] | None = None) -> SimConfig:
    """Read an INI config file, apply 'section.key' overrides, return SimConfig.

    The result is not yet validated; pass it through validate().
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    with open(path) as fh:
        cp.read_file(fh, source=path)
    return config_from_parser(cp, overrides)


def config_from_parser(cp: configparser.ConfigParser,
                       overrides: dict[str, str] | None = None) -> SimConfig:
    for spec in (overrides or {}).items():
        key, value = spec
        if "." not in key:
            raise ConfigError(f"override {key!r}: expected section.key=value")
        section, name = key.split(".", 1)
        if not cp.has_section(section):
            cp.add_section(section)
        cp.set(section, name, value)

    defaults = SimConfig()

    def get(section, key, cast, default):
        if cp.has_option(section, key):
            return cast(cp.get(section, key))
        return default

    variant = ModelVariant(
        kind=_enum(VariantKind, get("model", "variant", str, defaults.variant.kind.value), "model.variant"),
        anisotropy_mode=_enum(AnisotropyMode,
                              get("model", "anisotropy_mode", str,
                                  defaults.variant.anisotropy_mode.value),
                              "model.anisotropy_mode"),
    )
    aniso = AnisotropySpec(
        kind=_enum(AnisotropyKind, get("anisotropy", "kind", str, "isotropic"), "anisotropy.kind"),
        C=get("anisotropy", "c", float, 0.0),
        gamma0=get("anisotropy", "gamma0", float, 1.0),
        rho_bar=get("anisotropy", "rho_bar", float, 0.0),
        wells=get("anisotropy", "wells", _parse_wells, ()),
    )
    center = get("ic", "center", lambda t: _tuple_of(float, t), None)
    ic = InitialConditionSpec(
        kind=_enum(ICKind, get("ic", "kind", str, "circle"), "ic.kind"),
        radius=get("ic", "radius", float, 0.5),
        amplitude=get("ic", "amplitude", float, 0.0),
        lobes=get("ic", "lobes", int, 4),
        center=center,
        width=get("ic", "width", float, 1.0),
        x0=get("ic", "x0", float, 0.0),
        noise_amplitude=get("ic", "noise_amplitude", float, 0.05),
        path=get("ic", "path", str, ""),
    )
    xi_text = get("model", "xi", str, "")
    return SimConfig(
        variant=variant,
        epsilon=get("model", "epsilon", float, defaults.epsilon),
        alpha=get("model", "alpha", float, defaults.alpha),
        beta=get("model", "beta", float, defaults.beta),
        p=get("model", "p", float, defaults.p),
        xi=float(xi_text) if xi_text else None,
        omega_dw=get("expert", "omega", float, OMEGA_DW),
        mu=get("expert", "mu", float, MU),
        tau=get("model", "tau", float, defaults.tau),
        n_steps=get("model", "n_steps", int, defaults.n_steps),
        extent=get("grid", "extent", lambda t: _tuple_of(float, t), defaults.extent),
        cells=get("grid", "cells", lambda t: _tuple_of(int, t), defaults.cells),
        bc=_enum(BoundaryKind, get("grid", "bc", str, defaults.bc.value), "grid.bc"),
        anisotropy=aniso,
        ic=ic,
        solver_tol=get("solver", "tol", float, defaults.solver_tol),
        solver_maxiter=get("solver", "maxiter", int, defaults.solver_maxiter),
        solver_ell=get("solver", "ell", int, defaults.solver_ell),
        equilibrium_tol=get("model", "equilibrium_tol", float, defaults.equilibrium_tol),
        output_dir=get("output", "dir", str, defaults.output_dir),
        output_every=get("output", "every", int, defaults.output_every),
        rng_seed=get("ic", "rng_seed", int, defaults.rng_seed),
    )
