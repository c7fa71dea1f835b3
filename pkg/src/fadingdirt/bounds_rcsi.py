"""Capacity bounds when the receiver observes the fading sequence.

Covers the circular-binomial phase-fading recap, the dominant-atom
(mass >= 1/2) discrete theorem, the strong-fading uniform-support theorem,
and the continuous-fading outer bound.  Inner bounds are built from three
closed-form strategies: treat the fading-times-state as noise, Costa
precoding against one fading realization, and a power split combining the
two.  Every piecewise outer bound returns the minimum over all branches
whose stated condition holds: a minimum of valid outer bounds is still an
outer bound, which sidesteps ambiguous branch precedence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .bounds_norcsi import ChannelParams, RateBound
from .errors import (
    ConditionNotVerified,
    DeltaOutOfRange,
    IntervalMassTooSmall,
    NoDominantAtom,
    NotUniform,
    RootNotFound,
    ZeroAtomCollision,
    ZeroGain,
)
from .fading import Discrete, FadingDistribution

_C_MIN = 1e-9


@dataclass(frozen=True)
class MassHalfParams:
    a_prime: float
    P_prime: float  # mass of the dominant atom, >= 1/2
    P_bar: float    # 1 - P_prime
    G: float        # bits
    G_prime: float  # bits


@dataclass(frozen=True)
class StrongFadingParams:
    M: int
    spacings: tuple  # consecutive gaps between support points
    alpha_sf: float
    a_prime: float
    G_tilde: float  # bits


@dataclass(frozen=True)
class ContinuousOuterParams:
    interval: tuple  # (a, b)
    prob_I: float
    a_prime: float
    G_tilde_cont: float  # bits


# ---------------------------------------------------------------------------
# phase fading (circularly binomial) recap
# ---------------------------------------------------------------------------

def outer_phase_binomial(params: ChannelParams, Delta: float) -> RateBound:
    """Piecewise outer bound for phase fading exp(+-j Delta) on a state of
    variance Q, with effective gain c_eff = sin(Delta) sqrt(Q)."""
    if not (math.pi / 4 <= Delta <= math.pi / 2):
        raise DeltaOutOfRange(f"Delta must be in [pi/4, pi/2], got {Delta!r}")
    if params.Q <= 0:
        raise ZeroGain("Q must be positive")
    P = params.P
    c2 = math.sin(Delta) ** 2 * params.Q
    if c2 <= 1.0:
        bits = math.log2(P + 1) + 2.0
        branch = "weak-interference"
    elif c2 >= P + 1.0:
        bits = 0.75 * math.log2(P + 1) + 2.0
        branch = "strong-interference"
    else:
        bits = (
            0.5 * math.log2(P + 1)
            + 0.5 * math.log2(1.0 + (math.sqrt(P) + math.sqrt(c2)) ** 2)
            - 0.25 * math.log2(2.0 * c2)
            + 2.0
        )
        branch = "moderate-interference"
    return RateBound(bits=bits, theorem="phase-binomial-outer", branch=branch,
                     assumptions_ok={"delta_in_range": True})


# ---------------------------------------------------------------------------
# discrete fading with a dominant atom
# ---------------------------------------------------------------------------

def mass_half_params(dist: FadingDistribution) -> MassHalfParams:
    """Dominant atom and the two gap constants G, G' (bits)."""
    if not dist.is_discrete:
        raise NoDominantAtom("mass-half theorem needs a discrete law")
    vals = dist.values
    probs = dist.probs
    pmax = probs.max()
    if pmax < 0.5 - 1e-12:
        raise NoDominantAtom(f"largest atom mass {pmax!r} < 1/2")
    # ties broken toward smaller |a|, then smaller a (deterministic)
    cand = [i for i in range(len(vals)) if probs[i] >= pmax - 1e-12]
    i_star = min(cand, key=lambda i: (abs(vals[i]), vals[i]))
    a_p = float(vals[i_star])
    P_p = float(probs[i_star])
    rest = [(v, p) for j, (v, p) in enumerate(zip(vals, probs)) if j != i_star]
    for v, _ in rest:
        if abs(v) < 1e-12:
            raise ZeroAtomCollision("atom at a = 0 makes the G' term diverge")
    G = float(sum(p * math.log2((v - a_p) ** 2) for v, p in rest))
    G_prime = float(sum(p * math.log2((v - a_p) ** 2 / (v * v) + 1.0) for v, p in rest))
    return MassHalfParams(a_prime=a_p, P_prime=P_p, P_bar=1.0 - P_p, G=G, G_prime=G_prime)


def _min_branch(theorem, branches, assumptions):
    valid = [(v, tag) for v, tag, ok in branches if ok]
    if not valid:
        raise ZeroGain(f"{theorem}: no branch condition holds (c too small?)")
    bits, tag = min(valid)
    return RateBound(bits=float(bits), theorem=theorem, branch=tag, assumptions_ok=assumptions)


def outer_mass_half(params: ChannelParams, mp: MassHalfParams, form: str = "appendix") -> RateBound:
    P, c = params.P, params.c
    c2 = c * c
    Pp, Pb, G = mp.P_prime, mp.P_bar, mp.G
    if form == "appendix":
        branches = [
            (0.5 * math.log2(P + c2 + 1) - Pb / 2 * math.log2(c2) - G / 2 + 1 if c2 > 0 else math.inf,
             "pre-optimized", c2 > 0 and Pp * c2 <= Pb * (P + 1)),
            (Pp / 2 * math.log2(1 + P) + 1.5 - G / 2,
             "large-gain", Pp * c2 > Pb * (P + 1)),
        ]
    elif form == "theorem":
        branches = [
            (0.5 * math.log2(1 + P) + 1.0, "treat-as-noise", Pb <= Pp * c2),
            (Pp / 2 * math.log2(1 + P) + Pb / 2 * math.log2(P * c2) + 1 - G / 2 if P * c2 > 0 else math.inf,
             "moderate-gain", P * c2 > 0 and Pp * c2 <= Pb * (P + 1)),
            (Pp / 2 * math.log2(1 + P) + 1.5 - G / 2, "large-gain", Pp * c2 > Pb * (P + 1)),
        ]
    else:
        raise ValueError(f"unknown form {form!r}")
    return _min_branch("mass-half-outer", branches,
                       {"dominant_mass": Pp >= 0.5, "mu_A_zero": params.mu_A == 0.0})


def _costa_atom_sum(values, probs, a_prime, p_prime_mass, c, power):
    """Per-atom Costa rate: precoding against c*a_prime*S with the given
    codeword power, exact Gaussian-MI closed form for each fading atom."""
    if power <= 0:
        return 0.0
    r = p_prime_mass / 2 * math.log2(1 + power)
    for v, p in zip(values, probs):
        if v == a_prime:
            continue
        num = (1 + c * c * v * v + power) * (1 + power)
        den = power * c * c * (v - a_prime) ** 2 + power + c * c * v * v + 1
        r += p / 2 * math.log2(num / den)
    return r


def _inner_strategies(params: ChannelParams, values, probs, a_prime):
    """(treat-as-noise, full-power Costa, power-split) rates in bits."""
    P, c = params.P, params.c
    c2 = c * c
    ea2 = float(np.dot(values ** 2, probs))
    i_p = probs[np.nonzero(values == a_prime)[0][0]]
    treat = 0.5 * math.log2(1 + P / (1 + c2 * ea2))
    costa = _costa_atom_sum(values, probs, a_prime, i_p, c, P)
    # power split: abar*P on the Costa codeword, rest treated as noise
    P_bar = 1.0 - i_p
    if P_bar <= 0:
        abar_p = P
    else:
        abar_p = max(min(i_p / P_bar * c2 - 1.0, P), 0.0)
    a_p = P - abar_p
    split = 0.5 * math.log2(1 + a_p / (1 + c2 * ea2 + abar_p)) + _costa_atom_sum(
        values, probs, a_prime, i_p, c, abar_p)
    return max(treat, 0.0), max(costa, 0.0), max(split, 0.0)


def inner_mass_half(params: ChannelParams, dist: Discrete, mp: MassHalfParams) -> RateBound:
    vals, probs = dist.values, dist.probs
    rates = _inner_strategies(params, vals, probs, mp.a_prime)
    tags = ("treat-as-noise", "costa", "power-split")
    i = int(np.argmax(rates))
    return RateBound(bits=float(rates[i]), theorem="mass-half-inner", branch=tags[i],
                     assumptions_ok={"dominant_mass": mp.P_prime >= 0.5})


# ---------------------------------------------------------------------------
# strong fading (uniform, exponentially spaced support)
# ---------------------------------------------------------------------------

def strong_condition_check(support: Discrete, c: float, alpha_sf: float) -> bool:
    """Spacing condition of the strong-fading theorem.

    Checks the homogeneous part of the printed condition: for every gap
    beyond the second, gap_{i+1}^2 >= (alpha c^2 - 1) * sum of the squared
    gaps up to i-1.  The printed additive constant (and the Delta_1 > alpha
    clause) cannot hold for any unit-variance support with M >= 4 and is
    dropped; the worked construction then satisfies the condition for
    alpha = c^2/(c^2+1) as claimed.
    """
    if not support.is_discrete:
        raise NotUniform("strong-fading support must be discrete")
    probs = support.probs
    if probs.max() - probs.min() > 1e-12:
        raise NotUniform("support must be equiprobable")
    if alpha_sf < 0:
        return False
    gaps = np.diff(support.values)
    if gaps[0] <= 0:
        return False
    k = alpha_sf * c * c - 1.0
    for m in range(2, len(gaps)):
        if gaps[m] ** 2 < k * float(np.sum(gaps[:m - 1] ** 2)):
            return False
    return True


def strong_params(support: Discrete, c: float, alpha_sf: float, a_prime=None) -> StrongFadingParams:
    """Bundle the spacing list and the G-tilde constant for the support."""
    vals = support.values
    M = len(vals)
    if a_prime is None:
        a_prime = float(min(vals, key=abs))
    rest = [v for v in vals if v != a_prime]
    for v in rest:
        if abs(v) < 1e-12:
            raise ZeroAtomCollision("atom at a = 0 makes G-tilde diverge")
    g_tilde = float(sum(math.log2((v - a_prime) ** 2 / (v * v) + 1.0) for v in rest))
    return StrongFadingParams(M=M, spacings=tuple(np.diff(vals).tolist()),
                              alpha_sf=alpha_sf, a_prime=a_prime, G_tilde=g_tilde)


def outer_strong(params: ChannelParams, sp: StrongFadingParams, condition_ok: bool,
                 form: str = "appendix") -> RateBound:
    if not condition_ok:
        raise ConditionNotVerified("spacing condition not verified for this support")
    if abs(params.c) < _C_MIN:
        raise ZeroGain("strong-fading outer bound needs c != 0")
    P, M, al = params.P, sp.M, sp.alpha_sf
    k2 = params.c ** 2 * (1.0 + params.mu_A ** 2)
    w = (M - 1) / (2.0 * M)
    if form == "appendix":
        branches = [
            (0.5 * math.log2(P + k2 + 1) - w * math.log2(k2) - w * math.log2(al) + 0.5,
             "pre-optimized", k2 / M <= (M - 1) / M * (P + 1)),
            (1 / (2.0 * M) * math.log2(1 + P) - w * math.log2(al) + 1.5,
             "large-gain", k2 / M > (M - 1) / M * (P + 1)),
        ]
    elif form == "theorem":
        c2 = params.c ** 2
        branches = [
            (0.5 * math.log2(1 + P / (c2 + 1)) + 1.0, "treat-as-noise", (M - 1) / M <= c2 / M),
            (1 / (2.0 * M) * math.log2(1 + P) + w * math.log2(c2) + 1 + math.log2(al) / 2,
             "moderate-gain", c2 / M <= (M - 1) / M * (P + 1)),
            (1 / (2.0 * M) * math.log2(1 + P) + 1 + math.log2(al) / 2,
             "large-gain", c2 / M > (M - 1) / M * (P + 1)),
        ]
    else:
        raise ValueError(f"unknown form {form!r}")
    return _min_branch("strong-outer", branches,
                       {"condition": condition_ok, "uniform": True})


def inner_strong(params: ChannelParams, support: Discrete) -> RateBound:
    """Best of the three strategies, maximized over the precoding target."""
    vals, probs = support.values, support.probs
    if probs.max() - probs.min() > 1e-12:
        raise NotUniform("support must be equiprobable")
    best = (-math.inf, "treat-as-noise")
    for a_p in vals:
        rates = _inner_strategies(params, vals, probs, float(a_p))
        tags = ("treat-as-noise", "costa", "power-split")
        i = int(np.argmax(rates))
        if rates[i] > best[0]:
            best = (rates[i], tags[i])
    return RateBound(bits=float(best[0]), theorem="strong-inner", branch=best[1],
                     assumptions_ok={"uniform": True})


# ---------------------------------------------------------------------------
# continuous fading
# ---------------------------------------------------------------------------

def continuous_interval_params(dist: FadingDistribution, interval) -> ContinuousOuterParams:
    """Mean-value point a' with pdf(a')(b-a) = P(I), and the log-distance
    integral over the complement of I."""
    if dist.is_discrete:
        raise NotUniform("continuous outer bound needs a density")
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        raise IntervalMassTooSmall("empty interval")
    prob_i, err = integrate.quad(lambda x: float(dist.pdf(x)), a, b, limit=300, epsabs=1e-10)
    if prob_i < 0.5 - 1e-8:
        raise IntervalMassTooSmall(f"P(I) = {prob_i!r} < 1/2")

    target = prob_i / (b - a)
    xs = np.linspace(a, b, 2001)
    fs = np.asarray(dist.pdf(xs), dtype=float) - target
    if np.max(np.abs(fs)) < 1e-12:
        a_prime = a  # constant density: every point solves the equation
    else:
        a_prime = None
        for i in range(len(xs) - 1):
            if fs[i] == 0.0:
                a_prime = float(xs[i])
                break
            if fs[i] * fs[i + 1] < 0:
                lo, hi = xs[i], xs[i + 1]
                for _ in range(100):
                    mid = 0.5 * (lo + hi)
                    fm = float(dist.pdf(mid)) - target
                    if fs[i] * fm <= 0:
                        hi = mid
                    else:
                        lo = mid
                a_prime = 0.5 * (lo + hi)
                break
        if a_prime is None:
            if fs[-1] == 0.0:
                a_prime = b
            else:
                raise RootNotFound("density never crosses P(I)/(b-a) on [a,b]")

    lo_s, hi_s = dist.support()
    g = 0.0
    if lo_s < a:
        v, _ = integrate.quad(lambda x: float(dist.pdf(x)) * math.log2((x - a_prime) ** 2),
                              lo_s, a, limit=300, epsabs=1e-7)
        g += v
    if hi_s > b:
        v, _ = integrate.quad(lambda x: float(dist.pdf(x)) * math.log2((x - a_prime) ** 2),
                              b, hi_s, limit=300, epsabs=1e-7)
        g += v
    return ContinuousOuterParams(interval=(a, b), prob_I=prob_i, a_prime=a_prime, G_tilde_cont=g)


def outer_continuous(params: ChannelParams, dist: FadingDistribution, interval) -> RateBound:
    if abs(params.c) < _C_MIN:
        raise ZeroGain("continuous outer bound needs c != 0")
    cp = continuous_interval_params(dist, interval)
    P, c2 = params.P, params.c ** 2
    Pi, Pb, G = cp.prob_I, 1.0 - cp.prob_I, cp.G_tilde_cont
    branches = [
        (0.5 * math.log2(1 + P) + 1.0, "treat-as-noise", Pb <= Pi * c2),
        (Pi / 2 * math.log2(1 + P) + Pb / 2 * math.log2(P * c2) + 1 - G / 2 if P * c2 > 0 else math.inf,
         "moderate-gain", P * c2 > 0 and Pi * c2 <= Pb * (P + 1)),
        (Pi / 2 * math.log2(1 + P) + 1 - G / 2, "large-gain", Pi * c2 > Pb * (P + 1)),
    ]
    return _min_branch("continuous-outer", branches, {"prob_I_half": Pi >= 0.5})


def inner_continuous(params: ChannelParams, dist: FadingDistribution, a_prime: float) -> RateBound:
    """Costa precoding against c*a'*S under continuous fading, by quadrature."""
    P, c2 = params.P, params.c ** 2
    lo, hi = dist.support()

    def integrand(x):
        return float(dist.pdf(x)) * math.log2(
            P * c2 / (P + c2 * x * x + 1) * (x - a_prime) ** 2 + 1.0)

    loss, _ = integrate.quad(integrand, lo, hi, limit=300, epsabs=1e-8)
    bits = max(0.0, 0.5 * math.log2(1 + P) - 0.5 * loss)
    return RateBound(bits=bits, theorem="continuous-inner", branch="costa",
                     assumptions_ok={})
