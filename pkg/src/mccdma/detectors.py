"""Per-sub-band single-user and multi-user detectors.

Every detector consumes a :class:`SubbandProblem` holding the received
chips y = diag(h) C d + n of one sub-band (arbitrary leading batch axes)
and returns unit-desired-gain symbol estimates together with the
post-detection distortion variance each symbol carries into the soft
demapper: noise passed by the effective filter plus residual
multiple-access interference read off the symbol coupling matrix.

Detectors
---------
* ``egc``    - phase-only per-carrier correction, then despreading.
* ``mmsec``  - per-carrier Wiener gains h*/(|h|^2 + 1/chip_snr), scaled by a
  per-sub-band factor that restores unit desired gain.
* ``gmmse``  - joint Wiener detection over the sub-band, solved as the
  n_users x n_users system ((HC)^H HC + noise_var/E_s I) z = (HC)^H y and
  renormalized per symbol to unit desired gain.
* ``poly_gmmse`` - gmmse with the matrix inverse replaced by an order-L
  polynomial; coefficients are shared across users and minimize the summed
  symbol MSE (see ``_poly_fit_*``).
* ``pic`` / ``sic`` - parallel / successive interference cancellation
  around the per-carrier equalizers.

Polynomial coefficient modes
----------------------------
``exact_mse`` solves the weighted least-squares fit of P(t) to
E_s/(E_s t + noise_var) at the eigenvalues t of (HC)^H HC, with weights
t (E_s t + noise_var); this is equivalent to the moment (Hankel) normal
equations but conditions far better, and with order = spreading_factor it
reproduces gmmse exactly.  ``asymptotic`` keeps the same normal equations
but replaces the empirical eigenvalue moments by deterministic
approximations that depend only on the empirical moments of |h|^2 and the
load alpha = n_users / spreading_factor: the spectrum of (HC)^H HC for an
orthonormal code subset behaves like the free compression of the channel
power distribution, whose moments follow from multiplying its S-transform
with that of a Bernoulli(alpha) projection (computed here with truncated
power series).  Only code orthogonality enters, not the code values.

Interference-cancellation conventions (documented)
--------------------------------------------------
Stage 0 of PIC and every SIC detection step equalize with the configured
per-carrier detector using the chip SNR of the signal actually present
(all n_users codes for stage 0, the not-yet-cancelled codes for SIC).
Post-cancellation PIC stages re-equalize the residual with the single-user
chip SNR, since the interference has (ideally) been removed.  SIC ranks
the not-yet-cancelled codes by predicted post-detection variance and
breaks the equal-power downlink ties toward the lowest code index.  The
final stage always emits unclipped soft estimates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import mapping
from .spreading import CodeMatrix, despread

KINDS = ("egc", "mmsec", "gmmse", "poly_gmmse", "pic", "sic")
STAGE_EQUALIZERS = ("egc", "mmsec", "mrc")


@dataclass(frozen=True)
class SubbandProblem:
    """Received chips and exact CSI of one (batch of) sub-band(s)."""

    chips: np.ndarray          # (..., spreading_factor) received
    gains: np.ndarray          # (..., spreading_factor) channel H
    code: CodeMatrix
    noise_var: float
    symbol_energy: float = 1.0

    def __post_init__(self):
        sf = self.code.spreading_factor
        if self.chips.shape[-1] != sf or self.gains.shape[-1] != sf:
            raise ValueError(f"chips and gains must have {sf} entries per sub-band")
        if self.noise_var < 0:
            raise ValueError("noise variance must be non-negative")

    @property
    def n_users(self) -> int:
        return self.code.n_users

    def chip_snr_inv(self, load: int | None = None) -> float:
        """1/chip_snr for ``load`` superposed codes (default: all users)."""
        load = self.n_users if load is None else load
        return self.noise_var * self.code.spreading_factor / (
            load * self.symbol_energy)


@dataclass(frozen=True)
class DetectorSpec:
    """Which detector to run and its mode flags."""

    kind: str
    poly_order: int = 4
    poly_mode: str = "exact_mse"          # or "asymptotic"
    stages: int = 2
    decision: str = "hard"                # or "soft"
    stage_equalizer: tuple[str, ...] | str = "mmsec"
    genie: bool = False                   # PIC cancels with the true symbols

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.poly_order < 1:
            raise ValueError("poly_order must be >= 1")
        if self.poly_mode not in ("exact_mse", "asymptotic"):
            raise ValueError("poly_mode must be 'exact_mse' or 'asymptotic'")
        if self.stages < 1:
            raise ValueError("stages must be >= 1")
        if self.decision not in ("hard", "soft"):
            raise ValueError("decision must be 'hard' or 'soft'")
        eqs = self.stage_equalizer
        if isinstance(eqs, str):
            eqs = (eqs,)
        eqs = tuple(eqs)
        for eq in eqs:
            if eq not in STAGE_EQUALIZERS:
                raise ValueError(f"stage equalizer must be one of {STAGE_EQUALIZERS}")
        object.__setattr__(self, "stage_equalizer", eqs)

    def equalizer_for_stage(self, stage: int) -> str:
        eqs = self.stage_equalizer
        return eqs[stage] if stage < len(eqs) else eqs[-1]

    @property
    def label(self) -> str:
        """Canonical detector id used in CSV output and on the CLI."""
        if self.kind == "poly_gmmse":
            mode = "exact" if self.poly_mode == "exact_mse" else "asym"
            return f"poly-L{self.poly_order}-{mode}"
        if self.kind == "pic":
            name = f"pic-s{self.stages}-{self.equalizer_for_stage(0)}-{self.decision}"
            return name + ("-genie" if self.genie else "")
        if self.kind == "sic":
            return f"sic-{self.equalizer_for_stage(0)}-{self.decision}"
        return self.kind


@dataclass(frozen=True)
class DetectionResult:
    """Unit-gain symbol estimates plus per-symbol distortion variances."""

    symbols: np.ndarray     # (..., n_users)
    noise_var: np.ndarray   # (..., n_users)


def parse_detector(text: str) -> DetectorSpec:
    """Parse a CLI detector string: ``name[:key=value[:key=value]...]``.

    Keys: ``L`` (poly order), ``mode`` (exact_mse|asymptotic), ``stages``,
    ``decision`` (hard|soft), ``eq`` (egc|mmsec|mrc), ``genie`` (0|1).
    Colons separate the options so detector lists can stay comma separated.
    """
    name, _, rest = text.strip().partition(":")
    name = name.lower()
    if name not in KINDS:
        raise ValueError(f"unknown detector '{name}'")
    kwargs: dict[str, object] = {"kind": name}
    if rest:
        for item in rest.split(":"):
            key, _, val = item.partition("=")
            key, val = key.strip(), val.strip()
            if key == "L":
                kwargs["poly_order"] = int(val)
            elif key == "mode":
                kwargs["poly_mode"] = {"exact": "exact_mse", "asym": "asymptotic",
                                       "exact_mse": "exact_mse",
                                       "asymptotic": "asymptotic"}[val]
            elif key == "stages":
                kwargs["stages"] = int(val)
            elif key == "decision":
                kwargs["decision"] = val
            elif key == "eq":
                kwargs["stage_equalizer"] = tuple(val.split("+"))
            elif key == "genie":
                kwargs["genie"] = val not in ("0", "false", "False")
            else:
                raise ValueError(f"unknown detector option '{key}'")
    return DetectorSpec(**kwargs)


# ---------------------------------------------------------------------------
# shared linear-detector machinery


def _effective_matrix(problem: SubbandProblem) -> np.ndarray:
    """U = diag(h) C, shape (..., spreading_factor, n_users)."""
    return problem.gains[..., :, None] * problem.code.matrix


def post_detection_noise_var(problem: SubbandProblem, rows: np.ndarray,
                             include_mai: bool = True) -> np.ndarray:
    """Distortion variance of unit-gain filter rows (..., n_users, S_F).

    noise_var * ||w_k||^2 plus, when ``include_mai``, the residual MAI power
    E_s * sum_{j != k} |T_kj|^2 from the symbol coupling T = W U.
    """
    u = _effective_matrix(problem)
    noise = problem.noise_var * np.sum(np.abs(rows) ** 2, axis=-1)
    if not include_mai:
        return noise
    coupling = rows @ u
    power = np.sum(np.abs(coupling) ** 2, axis=-1)
    k = np.arange(problem.n_users)
    desired = np.abs(coupling[..., k, k]) ** 2
    return noise + problem.symbol_energy * (power - desired)


def _per_carrier_gains(problem: SubbandProblem, kind: str, load: int
                       ) -> tuple[np.ndarray, np.ndarray]:
    """Unit-gain per-carrier equalizer: (gains g, desired gain mu pre-division).

    Walsh codes have |c_kl|^2 = 1/S_F, so the desired gain mu = mean(g * h)
    is common to every code.
    """
    h = problem.gains
    a2 = np.abs(h) ** 2
    if kind == "mmsec":
        beta = problem.chip_snr_inv(load)
        denom = a2 + beta
        g = np.where(denom > 0, np.conj(h) / np.where(denom > 0, denom, 1.0), 0.0)
    elif kind == "egc":
        mag = np.sqrt(a2)
        g = np.where(mag > 0, np.conj(h) / np.where(mag > 0, mag, 1.0), 0.0)
    elif kind == "mrc":
        g = np.conj(h)
    else:
        raise ValueError(f"unknown per-carrier equalizer '{kind}'")
    mu = np.mean((g * h).real, axis=-1)
    return g, mu


def _per_carrier_detect(problem: SubbandProblem, kind: str) -> DetectionResult:
    """Full-statistics single-user detection (EGC / MRC and MMSEC stage 0)."""
    g, mu = _per_carrier_gains(problem, kind, problem.n_users)
    safe_mu = np.where(mu != 0, mu, 1.0)
    g_n = g / safe_mu[..., None]
    symbols = despread(g_n * problem.chips, problem.code)
    rows = np.conj(problem.code.matrix.T) * g_n[..., None, :]
    return DetectionResult(symbols, post_detection_noise_var(problem, rows))


def mmsec_gains(gains: np.ndarray, inv_chip_snr: float
                ) -> tuple[np.ndarray, np.ndarray]:
    """Per-carrier MMSE combining gains and the sub-band normalization.

    Returns the unscaled gains h*/(|h|^2 + inv_chip_snr) and the factor
    rho = S_F / sum(|h|^2 / (|h|^2 + inv_chip_snr)) that restores unit
    desired gain; the applied equalizer is rho * gains.
    """
    h = np.asarray(gains, dtype=np.complex128)
    a2 = np.abs(h) ** 2
    denom = a2 + inv_chip_snr
    g = np.where(denom > 0, np.conj(h) / np.where(denom > 0, denom, 1.0), 0.0)
    terms = np.where(denom > 0, a2 / np.where(denom > 0, denom, 1.0), 0.0)
    rho = h.shape[-1] / np.sum(terms, axis=-1)
    return g, rho


def egc(problem: SubbandProblem) -> DetectionResult:
    """Equal-gain combining: remove the carrier phases, despread.

    Carriers in a perfect fade (h = 0) contribute nothing.  The output is
    scaled to unit desired gain so the demapper stays calibrated.
    """
    return _per_carrier_detect(problem, "egc")


def mmsec(problem: SubbandProblem) -> DetectionResult:
    """Per-carrier MMSE combining with per-sub-band unit-gain scaling."""
    g, rho = mmsec_gains(problem.gains, problem.chip_snr_inv())
    g_s = rho[..., None] * g
    symbols = despread(g_s * problem.chips, problem.code)
    rows = np.conj(problem.code.matrix.T) * g_s[..., None, :]
    return DetectionResult(symbols, post_detection_noise_var(problem, rows))


def gmmse(problem: SubbandProblem) -> DetectionResult:
    """Joint MMSE over the sub-band via the n_users x n_users system.

    With zero noise and a rank-deficient effective matrix the system is
    solved in the least-squares (pseudo-inverse) sense.
    """
    u = _effective_matrix(problem)
    uh = np.swapaxes(u, -1, -2).conj()
    gram = uh @ u
    k = problem.n_users
    beta = problem.noise_var / problem.symbol_energy
    a = gram + beta * np.eye(k)
    if problem.noise_var > 0:
        inv_a = np.linalg.inv(a)
    else:
        inv_a = np.linalg.pinv(a, hermitian=True)
    z = np.einsum("...ij,...j->...i", inv_a, np.einsum("...ij,...j->...i", uh,
                                                       problem.chips))
    rho = np.einsum("...ij,...ji->...i", inv_a, gram).real
    safe = np.abs(rho) > 1e-12
    rho_safe = np.where(safe, rho, 1.0)
    symbols = np.where(safe, z / rho_safe, 0.0)
    rows = (inv_a @ uh) / rho_safe[..., :, None]
    rows = np.where(safe[..., None], rows, 0.0)
    return DetectionResult(symbols, post_detection_noise_var(problem, rows))


# ---------------------------------------------------------------------------
# polynomial expansion


def _series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.size
    return np.convolve(a, b)[:n]


def _series_compose(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """outer(inner(z)) for truncated series with inner[0] = 0."""
    n = outer.size
    result = np.zeros(n)
    for c in outer[::-1]:
        result = _series_mul(result, inner)
        result[0] += c
    return result

def _series_invert(f: np.ndarray) -> np.ndarray:
    """Compositional inverse g of f (f[0] = 0, f[1] != 0): f(g(z)) = z."""
    n = f.size
    g = np.zeros(n)
    g[1] = 1.0 / f[1]
    for m in range(2, n):
        err = _series_compose(f, g)[m]
        g[m] -= err / f[1]
    return g


def free_compression_moments(eta: np.ndarray, alpha: float, n_moments: int
                             ) -> np.ndarray:
    """Deterministic moment approximation for R = (HC)^H HC, K x K.

    ``eta[q-1]`` is the q-th empirical moment of |h|^2 over the sub-band and
    ``alpha`` the load.  Treating the orthonormal code subset as a free
    compression, the S-transform of the compressed spectrum is the product
    of the channel power S-transform with (1+z)/(alpha+z); the returned
    array holds its first ``n_moments`` moments (index p-1 for moment p).
    """
    if not 0 < alpha <= 1:
        raise ValueError("load must satisfy 0 < alpha <= 1")
    p = n_moments
    size = p + 1
    psi_d = np.zeros(size)
    psi_d[1:] = eta[:p]
    psi_p = np.zeros(size)
    psi_p[1:] = alpha
    chi_d = _series_invert(psi_d)
    chi_p = _series_invert(psi_p)

    def s_transform(chi):
        over_z = chi[1:]                       # chi(z)/z, length p
        s = over_z.copy()
        s[1:] += over_z[:-1]                   # * (1 + z)
        return s

    s_prod = _series_mul(s_transform(chi_d), s_transform(chi_p))
    u = np.empty(p)                            # s_prod / (1 + z)
    for i in range(p):
        u[i] = s_prod[i] - (u[i - 1] if i else 0.0)
    chi_pd = np.zeros(size)
    chi_pd[1:] = u                             # * z
    psi_pd = _series_invert(chi_pd)
    return psi_pd[1:] / alpha


def _poly_fit_exact(theta: np.ndarray, scale: float, noise_var: float,
                    es: float, order: int) -> np.ndarray:
    """Weighted LS fit of P to es/(es*t + noise_var) at the eigenvalues.

    Returns coefficients of P in the scaled variable t/scale; weights
    t*(es*t + noise_var) make the fit minimize the summed symbol MSE.
    """
    nodes = theta / scale
    weights = theta * (es * theta + noise_var)
    target = es / (es * theta + noise_var)
    vand = np.vander(nodes, order, increasing=True)
    w = np.sqrt(np.maximum(weights, 0.0))
    coef, *_ = np.linalg.lstsq(vand * w[:, None], target * w, rcond=None)
    return coef


def _poly_fit_asymptotic(a2: np.ndarray, scale: float, alpha: float,
                         noise_var: float, es: float, order: int) -> np.ndarray:
    """Moment-domain normal equations with free-compression moments."""
    n_mom = 2 * order
    powers = np.cumprod(np.tile(a2, (n_mom, 1)), axis=0)  # |h|^(2q)
    eta = powers.mean(axis=1)
    rho = free_compression_moments(eta, alpha, n_mom)
    scaled = np.concatenate([[1.0], rho / scale ** np.arange(1, n_mom + 1)])
    idx = np.arange(order)
    a_mat = es * scale * scaled[idx[:, None] + idx + 2] + noise_var * scaled[idx[:, None] + idx + 1]
    rhs = es * scaled[idx + 1]
    coef, *_ = np.linalg.lstsq(a_mat, rhs, rcond=None)
    return coef


def poly_gmmse(problem: SubbandProblem, order: int | None = None,
               mode: str = "exact_mse") -> DetectionResult:
    """Polynomial approximation of :func:`gmmse` of the given order.

    The estimate is e_k^H P(R) (HC)^H y with R = (HC)^H HC and shared real
    coefficients (see module docstring).  Rank-deficient fits fall back to
    the minimum-norm least-squares solution, i.e. a smaller effective order.
    Normalization and the reported variances use the exact realization; only
    the coefficients are approximated.
    """
    order = 4 if order is None else int(order)
    if order < 1:
        raise ValueError("order must be >= 1")
    u = _effective_matrix(problem)
    uh = np.swapaxes(u, -1, -2).conj()
    gram = uh @ u
    z0 = np.einsum("...ij,...j->...i", uh, problem.chips)
    theta, vecs = np.linalg.eigh(gram)
    theta = np.maximum(theta, 0.0)
    es = problem.symbol_energy
    sigma2 = problem.noise_var
    alpha = problem.n_users / problem.code.spreading_factor

    batch_shape = theta.shape[:-1]
    k = problem.n_users
    coefs = np.empty(batch_shape + (order,))
    a2_all = np.abs(problem.gains) ** 2
    # coefficients live in the scaled variable t/scale, scale = max |h|^2
    scales = np.asarray(np.maximum(a2_all.max(axis=-1), 1e-300))
    for idx in np.ndindex(*batch_shape):
        if mode == "exact_mse":
            coefs[idx] = _poly_fit_exact(theta[idx], scales[idx], sigma2, es,
                                         order)
        elif mode == "asymptotic":
            coefs[idx] = _poly_fit_asymptotic(a2_all[idx], scales[idx], alpha,
                                              sigma2, es, order)
        else:
            raise ValueError("mode must be 'exact_mse' or 'asymptotic'")

    # Horner evaluation of P(R) z0 in the scaled variable
    acc = coefs[..., -1:] * z0
    for i in range(order - 2, -1, -1):
        acc = np.einsum("...ij,...j->...i", gram, acc) / scales[..., None]
        acc = acc + coefs[..., i:i + 1] * z0

    nodes = theta / scales[..., None]
    p_nodes = np.zeros_like(nodes)
    for i in range(order - 1, -1, -1):
        p_nodes = p_nodes * nodes + coefs[..., i:i + 1]
    v2 = np.abs(vecs) ** 2                       # |V_kj|^2
    gain = np.einsum("...kj,...j->...k", v2, p_nodes * theta)
    filt2 = np.einsum("...kj,...j->...k", v2, p_nodes ** 2 * theta)
    safe = np.abs(gain) > 1e-12
    gain_safe = np.where(safe, gain, 1.0)
    symbols = np.where(safe, acc / gain_safe, 0.0)

    coupling = np.einsum("...kj,...j,...lj->...kl", vecs, p_nodes * theta,
                         vecs.conj()) / gain_safe[..., :, None]
    power = np.sum(np.abs(coupling) ** 2, axis=-1)
    kk = np.arange(k)
    desired = np.abs(coupling[..., kk, kk]) ** 2
    var = sigma2 * filt2 / gain_safe ** 2 + es * (power - desired)
    return DetectionResult(symbols, var)


# ---------------------------------------------------------------------------
# interference cancellation


def _decide(symbols: np.ndarray, decision: str,
            const: mapping.Constellation) -> np.ndarray:
    if decision == "hard":
        return mapping.hard_decision(symbols, const)
    return mapping.clip_to_hull(symbols, const)


def pic(problem: SubbandProblem, spec: DetectorSpec,
        const: mapping.Constellation | None = None,
        true_symbols: np.ndarray | None = None) -> DetectionResult:
    """Parallel interference cancellation around per-carrier equalizers.

    Stage 0 is exactly the configured single-user detector; stage i >= 1
    rebuilds every interferer from the previous stage decisions, subtracts,
    and re-equalizes with the single-user chip SNR.  With ``spec.genie``
    (or ``true_symbols``) the cancellation uses the true symbols.
    """
    if spec.stages < 1:
        raise ValueError("PIC needs at least one stage")
    stage0 = _per_carrier_detect(problem, spec.equalizer_for_stage(0)) \
        if spec.equalizer_for_stage(0) != "mmsec" else mmsec(problem)
    if spec.stages == 1:
        return stage0
    if const is None and true_symbols is None:
        raise ValueError("PIC decisions need a constellation")

    u = _effective_matrix(problem)
    code_conj = np.conj(problem.code.matrix.T)      # (n_users, S_F)
    estimates = stage0.symbols
    noise = None
    for stage in range(1, spec.stages):
        if true_symbols is not None:
            decided = np.asarray(true_symbols, dtype=np.complex128)
        else:
            decided = _decide(estimates, spec.decision, const)
        recon = np.einsum("...lk,...k->...l", u, decided)
        own = np.swapaxes(u, -1, -2) * decided[..., :, None]
        residual = problem.chips[..., None, :] - recon[..., None, :] + own
        g, mu = _per_carrier_gains(problem, spec.equalizer_for_stage(stage), 1)
        safe_mu = np.asarray(np.where(mu != 0, mu, 1.0))
        estimates = np.einsum("kl,...l,...kl->...k", code_conj, g, residual)
        estimates = estimates / safe_mu[..., None]
        row_norm2 = np.sum(np.abs(g) ** 2, axis=-1) / (
            problem.code.spreading_factor * safe_mu ** 2)
        noise = problem.noise_var * row_norm2
    var = np.broadcast_to(np.asarray(noise)[..., None], estimates.shape).copy()
    return DetectionResult(estimates, var)


def sic(problem: SubbandProblem, spec: DetectorSpec,
        const: mapping.Constellation) -> DetectionResult:
    """Successive interference cancellation, full pass over all codes.

    Repeatedly equalizes the residual (chip SNR of the remaining codes),
    detects the code with the lowest predicted post-detection variance,
    reconstructs and subtracts it.  Soft pre-decision estimates and their
    predicted variances are collected per user.
    """
    chips = np.asarray(problem.chips, dtype=np.complex128)
    gains = np.asarray(problem.gains, dtype=np.complex128)
    batch_shape = chips.shape[:-1]
    sf, k = problem.code.spreading_factor, problem.n_users
    flat_chips = chips.reshape(-1, sf)
    flat_gains = gains.reshape(-1, sf)
    out_sym = np.empty(flat_chips.shape[:1] + (k,), dtype=np.complex128)
    out_var = np.empty_like(out_sym, dtype=np.float64)
    cmat = problem.code.matrix
    eq_kind = spec.equalizer_for_stage(0)
    es = problem.symbol_energy

    for b in range(flat_chips.shape[0]):
        y = flat_chips[b].copy()
        h = flat_gains[b]
        u = h[:, None] * cmat
        remaining = list(range(k))
        while remaining:
            sub = SubbandProblem(chips=y, gains=h, code=problem.code,
                                 noise_var=problem.noise_var,
                                 symbol_energy=es)
            g, mu = _per_carrier_gains(sub, eq_kind, len(remaining))
            safe_mu = mu if mu != 0 else 1.0
            rows = (np.conj(cmat[:, remaining].T) * g) / safe_mu
            z = rows @ y
            coupling = rows @ u[:, remaining]
            power = np.sum(np.abs(coupling) ** 2, axis=-1)
            desired = np.abs(np.diagonal(coupling)) ** 2
            var = problem.noise_var * np.sum(np.abs(rows) ** 2, axis=-1) \
                + es * (power - desired)
            pick = int(np.argmin(var))        # ties -> lowest code index
            user = remaining[pick]
            out_sym[b, user] = z[pick]
            out_var[b, user] = var[pick]
            y = y - u[:, user] * _decide(z[pick], spec.decision, const)
            remaining.pop(pick)
    return DetectionResult(out_sym.reshape(batch_shape + (k,)),
                           out_var.reshape(batch_shape + (k,)))


def detect(problem: SubbandProblem, spec: DetectorSpec,
           const: mapping.Constellation | None = None,
           true_symbols: np.ndarray | None = None) -> DetectionResult:
    """Dispatch on ``spec.kind``."""
    if spec.kind == "egc":
        return egc(problem)
    if spec.kind == "mmsec":
        return mmsec(problem)
    if spec.kind == "gmmse":
        return gmmse(problem)
    if spec.kind == "poly_gmmse":
        return poly_gmmse(problem, spec.poly_order, spec.poly_mode)
    if spec.kind == "pic":
        return pic(problem, spec, const,
                   true_symbols if spec.genie else None)
    if spec.kind == "sic":
        return sic(problem, spec, const)
    raise ValueError(f"unknown detector kind '{spec.kind}'")
