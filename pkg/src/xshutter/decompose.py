"""Variational decomposition of a (blur, RS) pair into N sharp frames.

Every latent frame is a mask-weighted blend of the blur view and the RS view,
each backward-warped by a time-scaled copy of one base flow (linear motion).
The base flow and the mask logits minimise a Charbonnier re-synthesis energy

    E = lb * sum rho(mean_t S_t - B) + lr * sum rho(RS(S) - R) + ltv * TV(base)

by gradient descent with Armijo backtracking over an image pyramid.
"""
from __future__ import annotations

import dataclasses
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.fft import dctn, idctn

from . import kernels
from .errors import ConfigError, ParameterError, SolverDivergenceError
from .flowwarp import FlowField, fuse
from .formation import LatentSequence, ObservationPair, mean_frames, shift_image
from .timing import TimingConfig, row_latent_indices

log = logging.getLogger(__name__)

ARMIJO_C = 1e-4
BACKTRACK = 0.5
MAX_BACKTRACKS = 40
MIN_LEVEL_SIZE = 8


@dataclass(frozen=True)
class DecomposeConfig:
    n_levels: int = 3
    iters_per_level: int = 100
    step_size: float = 100.0
    lambda_tv: float = 0.05
    lambda_blur: float = 1.0
    lambda_rs: float = 1.0
    charbonnier_eps: float = 1e-3
    t_anchor_B: float = 0.5
    seed: int = 0
    mask_step_scale: float = 1.0
    smooth_px: float = 32.0
    search_px: float = 48.0
    tol: float = 1e-7
    register_views: bool = True
    max_align_px: int = 8
    gamma_bounds: tuple = (0.5, 2.0)

    def __post_init__(self):
        if self.n_levels < 1:
            raise ConfigError("n_levels must be >= 1")
        if self.iters_per_level < 0:
            raise ConfigError("iters_per_level must be >= 0")
        if not self.step_size > 0 or not self.mask_step_scale > 0:
            raise ConfigError("step sizes must be positive")
        if min(self.lambda_tv, self.lambda_blur, self.lambda_rs) < 0:
            raise ConfigError("energy weights must be >= 0")
        if not self.charbonnier_eps > 0:
            raise ConfigError("charbonnier_eps must be positive")
        if self.smooth_px < 0 or self.search_px < 0 or self.tol < 0:
            raise ConfigError("smooth_px, search_px and tol must be >= 0")
        if self.max_align_px < 0:
            raise ConfigError("max_align_px must be >= 0")
        lo, hi = self.gamma_bounds
        if not 0 < lo <= 1 <= hi:
            raise ConfigError("gamma_bounds must satisfy 0 < lo <= 1 <= hi")
        object.__setattr__(self, "gamma_bounds", (float(lo), float(hi)))

    @classmethod
    def from_dict(cls, data: dict) -> "DecomposeConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError(f"unknown decompose keys: {', '.join(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


class TracePoint(NamedTuple):
    iteration: int
    level: int
    energy: float


@dataclass
class DecomposeState:
    base_flow: FlowField
    mask_logits: np.ndarray
    level: int = 0
    energy_trace: list = field(default_factory=list)
    rs_offset: tuple = (0, 0)
    rs_gamma: float = 1.0

    @classmethod
    def initial(cls, height: int, width: int, flow: FlowField | None = None) -> "DecomposeState":
        flow = flow if flow is not None else FlowField.zeros(height, width)
        return cls(flow, np.zeros((height, width)))

    @property
    def mask(self) -> np.ndarray:
        return sigmoid(self.mask_logits)

    def save_trace(self, path) -> None:
        lines = ["iteration,level,energy"]
        lines += [f"{p.iteration},{p.level},{p.energy!r}" for p in self.energy_trace]
        Path(path).write_text("\n".join(lines) + "\n")


def sigmoid(x):
    x = np.asarray(x, dtype=np.float64)
    # exp of a non-positive argument only; stays in (0, 1) without overflow
    e = np.exp(-np.abs(x))
    return np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def charbonnier(x, eps):
    return np.sqrt(x * x + eps * eps)


def charbonnier_grad(x, eps):
    return x / np.sqrt(x * x + eps * eps)


def total_variation(flow: FlowField, eps: float) -> float:
    """Anisotropic Charbonnier TV of both flow components (forward differences)."""
    total = 0.0
    for comp in (flow.u, flow.v):
        total += charbonnier(np.diff(comp, axis=1), eps).sum()
        total += charbonnier(np.diff(comp, axis=0), eps).sum()
    return float(total)


def _tv_grad(comp, eps):
    g = np.zeros_like(comp)
    dx = charbonnier_grad(np.diff(comp, axis=1), eps)
    g[:, 1:] += dx
    g[:, :-1] -= dx
    dy = charbonnier_grad(np.diff(comp, axis=0), eps)
    g[1:, :] += dy
    g[:-1, :] -= dy
    return g


class _Model:
    """Precomputed per-level quantities for one (B, R) pair."""

    def __init__(self, blur, rs, timing: TimingConfig, cfg: DecomposeConfig):
        self.blur = np.ascontiguousarray(blur, dtype=np.float64)
        self.rs = np.ascontiguousarray(rs, dtype=np.float64)
        self.timing = timing
        self.cfg = cfg
        n = timing.n_latent
        self.n = n
        self.owner = row_latent_indices(timing)
        self.rows = np.arange(timing.image_height)
        tau = self.owner / (n - 1)
        times = np.arange(n) / (n - 1)
        self.blur_scale = cfg.t_anchor_B - times  # (N,)
        self.rs_scale = tau[None, :] - times[:, None]  # (N, H)

    def frames(self, flow: FlowField, logits):
        m = sigmoid(logits)
        p = np.empty((self.n,) + self.blur.shape)
        q = np.empty_like(p)
        s = np.empty_like(p)
        for t in range(self.n):
            cb = self.blur_scale[t]
            p[t] = kernels.warp(self.blur, cb * flow.u, cb * flow.v)
            cr = self.rs_scale[t][:, None]
            q[t] = kernels.warp(self.rs, cr * flow.u, cr * flow.v)
            s[t] = fuse(p[t], q[t], m)
        return m, p, q, s

    def terms(self, flow: FlowField, logits, cache=False):
        cfg = self.cfg
        eps = cfg.charbonnier_eps
        m, p, q, s = self.frames(flow, logits)
        r_blur = mean_frames(s) - self.blur
        r_rs = s[self.owner, self.rows] - self.rs
        terms = {
            "blur": cfg.lambda_blur * float(charbonnier(r_blur, eps).sum()),
            "rs": cfg.lambda_rs * float(charbonnier(r_rs, eps).sum()),
            "tv": cfg.lambda_tv * total_variation(flow, eps),
        }
        if cache:
            terms["_cache"] = (m, p, q, r_blur, r_rs)
        return terms

    def energy(self, flow, logits) -> float:
        t = self.terms(flow, logits)
        return t["blur"] + t["rs"] + t["tv"]

    def value_and_grad(self, flow: FlowField, logits):
        cfg = self.cfg
        eps = cfg.charbonnier_eps
        terms = self.terms(flow, logits, cache=True)
        m, p, q, r_blur, r_rs = terms.pop("_cache")
        value = terms["blur"] + terms["rs"] + terms["tv"]

        # dE/dS_t for every latent frame
        g_s = np.empty_like(p)
        g_s[:] = (cfg.lambda_blur / self.n) * charbonnier_grad(r_blur, eps)
        g_s[self.owner, self.rows] += cfg.lambda_rs * charbonnier_grad(r_rs, eps)

        g_mask = (g_s * (p - q)).sum(axis=(0, 3))
        g_logits = g_mask * m * (1.0 - m)

        m3 = m[:, :, None]
        gu = np.zeros_like(flow.u)
        gv = np.zeros_like(flow.v)
        for t in range(self.n):
            cb = self.blur_scale[t]
            if cb != 0.0:
                pu, pv = kernels.warp_vjp_flow(self.blur, cb * flow.u, cb * flow.v, m3 * g_s[t])
                gu += cb * pu
                gv += cb * pv
            cr = self.rs_scale[t][:, None]
            qu, qv = kernels.warp_vjp_flow(self.rs, cr * flow.u, cr * flow.v, (1.0 - m3) * g_s[t])
            gu += cr * qu
            gv += cr * qv
        if cfg.lambda_tv:
            gu += cfg.lambda_tv * _tv_grad(flow.u, eps)
            gv += cfg.lambda_tv * _tv_grad(flow.v, eps)
        return value, FlowField(gu, gv), g_logits


def _model(pair: ObservationPair, cfg: DecomposeConfig, state: DecomposeState | None = None):
    rs = pair.rs
    if state is not None:
        rs = registered_rs(rs, state.rs_offset, state.rs_gamma)
    return _Model(pair.blur, rs, pair.timing, cfg)


def reconstruct_frame(pair: ObservationPair, state: DecomposeState, t: int,
                      t_anchor: float = 0.5) -> np.ndarray:
    """Latent frame ``t``: blend of the blur and RS views warped to instant ``t``."""
    n = pair.timing.n_latent
    if isinstance(t, bool) or not 0 <= t <= n - 1:
        raise ParameterError(f"t={t} outside 0..{n - 1}")
    cfg = DecomposeConfig(t_anchor_B=t_anchor, register_views=False)
    _, _, _, s = _model(pair, cfg, state).frames(state.base_flow, state.mask_logits)
    return s[t]


def reconstruct_sequence(pair: ObservationPair, state: DecomposeState,
                         t_anchor: float = 0.5) -> LatentSequence:
    cfg = DecomposeConfig(t_anchor_B=t_anchor, register_views=False)
    _, _, _, s = _model(pair, cfg, state).frames(state.base_flow, state.mask_logits)
    return LatentSequence(np.clip(s, 0.0, 1.0), pair.timing)


def energy_terms(pair: ObservationPair, state: DecomposeState, cfg: DecomposeConfig) -> dict:
    """Weighted blur, RS and smoothness contributions to the energy."""
    return _model(pair, cfg, state).terms(state.base_flow, state.mask_logits)


def energy(pair: ObservationPair, state: DecomposeState, cfg: DecomposeConfig) -> float:
    return _model(pair, cfg, state).energy(state.base_flow, state.mask_logits)


def energy_gradient(pair: ObservationPair, state: DecomposeState, cfg: DecomposeConfig):
    """Analytic gradient of :func:`energy`: (d_base_flow, d_mask_logits)."""
    _, g_flow, g_logits = _model(pair, cfg, state).value_and_grad(state.base_flow, state.mask_logits)
    return g_flow, g_logits


# -- pyramid ---------------------------------------------------------------

def downsample(img):
    """2x area-average; an odd trailing row/column is dropped."""
    h, w = img.shape[0] // 2 * 2, img.shape[1] // 2 * 2
    a = img[:h, :w]
    return 0.25 * (a[0::2, 0::2] + a[1::2, 0::2] + a[0::2, 1::2] + a[1::2, 1::2])


def _linear_axis(n_src, n_dst):
    pos = np.clip((np.arange(n_dst) + 0.5) * (n_src / n_dst) - 0.5, 0.0, n_src - 1.0)
    i0 = np.floor(pos).astype(np.intp)
    i1 = np.minimum(i0 + 1, n_src - 1)
    return i0, i1, pos - i0


def upsample(arr, shape):
    """Bilinear resize of a 2-D array to ``shape`` (pixel-centre aligned)."""
    y0, y1, fy = _linear_axis(arr.shape[0], shape[0])
    x0, x1, fx = _linear_axis(arr.shape[1], shape[1])
    rows = arr[y0] * (1.0 - fy)[:, None] + arr[y1] * fy[:, None]
    return rows[:, x0] * (1.0 - fx) + rows[:, x1] * fx


def _pyramid(pair: ObservationPair, n_levels: int):
    levels = [(pair.blur, pair.rs, pair.timing)]
    b, r = pair.blur, pair.rs
    for _ in range(n_levels - 1):
        if min(b.shape[0], b.shape[1]) // 2 < MIN_LEVEL_SIZE:
            break
        b, r = downsample(b), downsample(r)
        levels.append((b, r, pair.timing.with_size(b.shape[0], b.shape[1])))
    return levels


# -- view registration ----------------------------------------------------

GAMMA_TOL = 1e-3
REGISTER_GAMMA_TOL = GAMMA_TOL / 2
MAX_REGISTER_ROUNDS = 4


def registered_rs(rs, offset=(0, 0), gamma: float = 1.0):
    """Undo a known (dx, dy) misalignment and power-law ``gamma`` of the RS view."""
    dx, dy = offset
    if (dx, dy) != (0, 0):
        rs = shift_image(rs, -dx, -dy)
    if gamma != 1.0:
        rs = np.power(rs, 1.0 / gamma)
    return rs


def _reblur(model: _Model, rs, flow: FlowField):
    """Blur predicted from the RS view alone: every latent taken from R, then averaged."""
    acc = np.zeros_like(rs)
    for t in range(model.n):
        cr = model.rs_scale[t][:, None]
        acc += kernels.warp(rs, cr * flow.u, cr * flow.v)
    return acc / model.n


def _ncc(a, b) -> float:
    a = a - a.mean()
    b = b - b.mean()
    den = math.sqrt(float((a * a).sum() * (b * b).sum()))
    return float((a * b).sum()) / den if den > 0 else 0.0


def register_views(model: _Model, flow: FlowField, max_offset: int, gamma_bounds):
    """Integer offset and gamma of the RS view that best re-synthesise the blur.

    Given a motion estimate, re-blurring R must reproduce B. The offset
    maximises the normalised cross-correlation of re-blur and blur over the
    interior band, which ignores the unknown tone curve; the gamma then
    minimises their mean absolute difference by golden-section search.
    """
    m = max_offset
    h, w = model.blur.shape[:2]
    # Re-blurring drags clamped border pixels inward by up to the largest
    # displacement, so the comparison band excludes that too.
    reach = float(np.abs(model.rs_scale).max())
    mx = min(m + math.ceil(reach * float(np.abs(flow.u).max())), w // 4)
    my = min(m + math.ceil(reach * float(np.abs(flow.v).max())), h // 4)
    core = (slice(my, h - my), slice(mx, w - mx))
    target = model.blur[core]

    def cost(rs):
        return float(np.abs(_reblur(model, rs, flow)[core] - target).mean())

    def score(rs):
        return _ncc(_reblur(model, rs, flow)[core], target)

    best, best_score = (0, 0), score(model.rs)
    for dy in range(-m, m + 1):
        for dx in range(-m, m + 1):
            if (dx, dy) == (0, 0):
                continue
            c = score(shift_image(model.rs, -dx, -dy))
            if c > best_score:
                best, best_score = (dx, dy), c
    shifted = registered_rs(model.rs, best)
    base_cost = cost(shifted)

    lo, hi = (math.log(g) for g in gamma_bounds)
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = hi - phi * (hi - lo), lo + phi * (hi - lo)
    fa, fb = cost(registered_rs(shifted, gamma=math.exp(a))), cost(registered_rs(shifted, gamma=math.exp(b)))
    while hi - lo > GAMMA_TOL / 4:
        if fa <= fb:
            hi, b, fb = b, a, fa
            a = hi - phi * (hi - lo)
            fa = cost(registered_rs(shifted, gamma=math.exp(a)))
        else:
            lo, a, fa = a, b, fb
            b = lo + phi * (hi - lo)
            fb = cost(registered_rs(shifted, gamma=math.exp(b)))
    log_gamma = 0.5 * (lo + hi)
    gamma = 1.0
    if abs(log_gamma) > GAMMA_TOL and cost(registered_rs(shifted, gamma=math.exp(log_gamma))) < base_cost:
        gamma = math.exp(log_gamma)
    return best, gamma


# -- solver ----------------------------------------------------------------

class _Smoother:
    """Apply (I - mu * Laplacian)^-1 with Neumann boundaries via the DCT.

    Symmetric positive definite with unit gain on constant fields, so a
    smoothed gradient is still a descent direction.
    """

    def __init__(self, shape, length_px: float):
        h, w = shape
        ly = 2.0 - 2.0 * np.cos(np.pi * np.arange(h) / h)
        lx = 2.0 - 2.0 * np.cos(np.pi * np.arange(w) / w)
        self.gain = 1.0 / (1.0 + length_px ** 2 * (ly[:, None] + lx[None, :]))
        self.active = length_px > 0

    def __call__(self, g):
        if not self.active:
            return g
        return idctn(dctn(g, norm="ortho") * self.gain, norm="ortho")


def _solve_level(model: _Model, flow: FlowField, logits, cfg: DecomposeConfig,
                 level: int, trace: list):
    value, g_flow, g_logits = model.value_and_grad(flow, logits)
    if not math.isfinite(value):
        raise SolverDivergenceError(f"non-finite energy at level {level}", trace)
    trace.append(TracePoint(0, level, value))
    smooth = _Smoother(flow.shape, cfg.smooth_px / 2 ** level)
    alpha = cfg.step_size
    k = cfg.mask_step_scale
    accepted = 0
    stalled = 0
    while accepted < cfg.iters_per_level and stalled < 3:
        du, dv = smooth(g_flow.u), smooth(g_flow.v)
        dl = k * g_logits
        slope = float((du * g_flow.u).sum() + (dv * g_flow.v).sum() + (dl * g_logits).sum())
        if slope <= 0.0:
            break
        for _ in range(MAX_BACKTRACKS):
            trial_flow = FlowField(flow.u - alpha * du, flow.v - alpha * dv)
            trial_logits = logits - alpha * dl
            trial = model.energy(trial_flow, trial_logits)
            if not math.isfinite(trial):
                raise SolverDivergenceError(f"non-finite energy at level {level}", trace)
            if trial <= value - ARMIJO_C * alpha * slope:
                break
            alpha *= BACKTRACK
        else:
            break
        flow, logits = trial_flow, trial_logits
        accepted += 1
        stalled = stalled + 1 if value - trial <= cfg.tol * abs(value) else 0
        value, g_flow, g_logits = model.value_and_grad(flow, logits)
        trace.append(TracePoint(accepted, level, value))
        alpha *= 2.0
    return flow, logits


def _global_search(model: _Model, flow: FlowField, logits, reach: float, sign: int):
    """Best constant flow on a 1 px grid, first along u, then along v.

    ``sign`` restricts u to one half-line (+1 / -1); ``flow`` stays a candidate.
    """
    h, w = flow.shape
    steps = np.arange(1, int(math.floor(reach)) + 1, dtype=np.float64)
    u0, v0 = float(flow.u.mean()), float(flow.v.mean())
    if sign > 0:
        us = np.concatenate([[u0], steps])
    elif sign < 0:
        us = np.concatenate([[u0], -steps])
    else:
        us = np.concatenate([[u0], [0.0], steps, -steps])
    best = (model.energy(flow, logits), flow)
    for u in us:
        cand = FlowField.constant(h, w, u, v0)
        e = model.energy(cand, logits)
        if e < best[0]:
            best = (e, cand)
    ub = float(best[1].u.mean())
    for v in np.concatenate([steps, -steps]):
        cand = FlowField.constant(h, w, ub, v0 + v)
        e = model.energy(cand, logits)
        if e < best[0]:
            best = (e, cand)
    return best[1]


def decompose(pair: ObservationPair, cfg: DecomposeConfig | None = None,
              init_flow: FlowField | None = None):
    """Recover the N latent frames of ``pair``; returns (LatentSequence, DecomposeState).

    ``init_flow`` is a full-resolution starting base flow (zero by default).
    Before descending, the coarsest level tries constant flows up to
    ``cfg.search_px``; a non-zero ``init_flow`` confines that search to the
    half-line of its mean horizontal component. The solver draws no random
    numbers, so the result depends only on its inputs.
    """
    cfg = cfg or DecomposeConfig()
    flow, logits, trace = _coarse_to_fine(pair, cfg, init_flow)
    offset, gamma = (0, 0), 1.0
    if cfg.register_views and cfg.lambda_rs > 0:
        model = _Model(pair.blur, pair.rs, pair.timing, cfg)
        # a motion estimate from misregistered views is biased, so re-register
        # against each refined estimate until the registration settles
        for _ in range(MAX_REGISTER_ROUNDS):
            new_offset, new_gamma = register_views(model, flow, cfg.max_align_px, cfg.gamma_bounds)
            if new_offset == offset and abs(math.log(new_gamma / gamma)) <= REGISTER_GAMMA_TOL:
                break
            offset, gamma = new_offset, new_gamma
            log.info("RS view registered: offset %s, gamma %.4f", offset, gamma)
            work = ObservationPair(pair.blur, registered_rs(pair.rs, offset, gamma), pair.timing)
            flow, logits, trace = _coarse_to_fine(work, cfg, init_flow)
    state = DecomposeState(flow, logits, 0, trace, offset, gamma)
    return reconstruct_sequence(pair, state, cfg.t_anchor_B), state


def _coarse_to_fine(pair: ObservationPair, cfg: DecomposeConfig, init_flow):
    levels = _pyramid(pair, cfg.n_levels)
    coarse = levels[-1][0].shape[:2]
    factor = 2 ** (len(levels) - 1)
    if init_flow is None:
        flow = FlowField.zeros(*coarse)
    else:
        flow = FlowField(upsample(init_flow.u, coarse) / factor, upsample(init_flow.v, coarse) / factor)
    logits = np.zeros(coarse)
    sign = 0 if init_flow is None else int(np.sign(init_flow.u.mean()))
    trace: list = []
    for level in range(len(levels) - 1, -1, -1):
        blur, rs, timing = levels[level]
        shape = blur.shape[:2]
        if flow.shape != shape:
            sy = shape[0] / flow.shape[0]
            sx = shape[1] / flow.shape[1]
            flow = FlowField(upsample(flow.u, shape) * sx, upsample(flow.v, shape) * sy)
            logits = upsample(logits, shape)
        model = _Model(blur, rs, timing, cfg)
        if level == len(levels) - 1 and cfg.search_px > 0:
            flow = _global_search(model, flow, logits, cfg.search_px / factor, sign)
        flow, logits = _solve_level(model, flow, logits, cfg, level, trace)
    return flow, logits, trace


@dataclass
class DirectionReport:
    winner: str  # basin of the lower-energy run: "positive", "negative" or "none"
    sign: str  # sign of the winner's mean recovered u, "none" inside the dead zone
    energy_positive: float  # final energy of the run started at +epsilon
    energy_negative: float  # and of the run started at -epsilon
    energy_gap: float
    mean_u: float
    region_signs: list  # 2x2 grid, row-major
    state: DecomposeState = field(repr=False, default=None)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d.pop("state")
        return d


def _sign(x, dead_zone):
    if abs(x) <= dead_zone:
        return "none"
    return "positive" if x > 0 else "negative"


def disambiguation_report(pair: ObservationPair, cfg: DecomposeConfig | None = None,
                          epsilon: float = 1.0, gap_tol: float = 1e-4,
                          speed_dead_zone: float = 0.25) -> DirectionReport:
    """Solve from +epsilon and -epsilon uniform horizontal flows and compare.

    The lower-energy run wins; ``winner`` names the basin it ends in (the sign
    of its mean u), since a run may leave the half-line it started on. Energies
    within ``gap_tol`` give "none". ``speed_dead_zone`` is in pixels per unit
    exposure time.
    """
    cfg = cfg or DecomposeConfig()
    h, w = pair.timing.image_height, pair.timing.image_width
    runs = {}
    for name, s in (("positive", epsilon), ("negative", -epsilon)):
        _, state = decompose(pair, cfg, FlowField.constant(h, w, s))
        runs[name] = (state.energy_trace[-1].energy, state)
    e_pos, e_neg = runs["positive"][0], runs["negative"][0]
    gap = abs(e_pos - e_neg)
    state = runs["positive" if e_pos <= e_neg else "negative"][1]
    winner = "none" if gap <= gap_tol else _sign(float(state.base_flow.u.mean()), speed_dead_zone)
    u = state.base_flow.u
    mean_u = float(u.mean())
    sign = _sign(mean_u, speed_dead_zone)
    regions = []
    for rows in np.array_split(np.arange(h), 2):
        for cols in np.array_split(np.arange(w), 2):
            regions.append(_sign(float(u[np.ix_(rows, cols)].mean()), speed_dead_zone))
    return DirectionReport(winner, sign, e_pos, e_neg, gap, mean_u, regions, state)


def load_decompose_config(path) -> DecomposeConfig:
    data = json.loads(Path(path).read_text())
    return DecomposeConfig.from_dict(data.get("decompose", data))
