"""Finite-alphabet Gelfand-Pinsker machinery.

A problem instance fixes a state prior, a channel kernel W(y|x,s), and an
auxiliary alphabet size; the encoder strategy is a conditional law p(u|s)
plus a deterministic map x(u,s) (standard sufficiency for the GP problem).
The objective I(Y;U) - I(U;S) is evaluated exactly from the induced joint
law; it is maximized by alternating ascent (a Blahut-Arimoto-style
minorize-maximize step on p(u|s) interleaved with greedy reselection of
x(u,s)), with tiny instances brute-forced as an independent oracle.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateAtoms,
    InstanceTooLarge,
    MalformedAssignment,
    SpecInvalid,
)

_ROW_TOL = 1e-12
_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class GPInstance:
    states: tuple
    prior: tuple
    inputs: tuple
    aux_size: int
    outputs: tuple
    kernel: tuple  # nested (nx, ns, ny) probability table W(y | x, s)
    rcsi: bool = False

    def __post_init__(self):
        pr = np.asarray(self.prior, dtype=float)
        W = self.kernel_array
        if len(self.states) != len(self.prior) or len(self.states) == 0:
            raise SpecInvalid("state alphabet and prior sizes differ")
        if self.aux_size < 1:
            raise SpecInvalid("aux_size must be >= 1")
        if np.any(pr < 0) or abs(pr.sum() - 1.0) > _ROW_TOL:
            raise SpecInvalid("state prior is not a probability vector")
        if W.shape != (len(self.inputs), len(self.states), len(self.outputs)):
            raise SpecInvalid(f"kernel shape {W.shape} does not match alphabets")
        if np.any(W < 0) or np.max(np.abs(W.sum(axis=2) - 1.0)) > _ROW_TOL:
            raise SpecInvalid("kernel rows must sum to 1")

    @property
    def kernel_array(self):
        return np.asarray(self.kernel, dtype=float)

    @property
    def prior_array(self):
        return np.asarray(self.prior, dtype=float)

    def to_json(self):
        return {
            "states": list(self.states),
            "prior": list(self.prior),
            "inputs": list(self.inputs),
            "aux_size": self.aux_size,
            "outputs": [list(y) if isinstance(y, tuple) else y for y in self.outputs],
            "kernel": np.asarray(self.kernel, dtype=float).tolist(),
            "rcsi": self.rcsi,
        }

    @staticmethod
    def from_json(obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        outputs = tuple(tuple(y) if isinstance(y, list) else y for y in obj["outputs"])
        kernel = tuple(tuple(tuple(row) for row in plane) for plane in obj["kernel"])
        return GPInstance(
            states=tuple(obj["states"]),
            prior=tuple(obj["prior"]),
            inputs=tuple(obj["inputs"]),
            aux_size=int(obj["aux_size"]),
            outputs=outputs,
            kernel=kernel,
            rcsi=bool(obj.get("rcsi", False)),
        )


def _coerce_assignment(inst, p_u_given_s, x_of_us):
    nu, ns, nx = inst.aux_size, len(inst.states), len(inst.inputs)
    p = np.asarray(p_u_given_s, dtype=float)
    if p.shape != (nu, ns):
        raise MalformedAssignment(f"p(u|s) must have shape {(nu, ns)}, got {p.shape}")
    if np.any(p < -_ROW_TOL) or np.max(np.abs(p.sum(axis=0) - 1.0)) > 1e-9:
        raise MalformedAssignment("p(u|s) columns must be probability vectors")
    if isinstance(x_of_us, dict):
        x = np.empty((nu, ns), dtype=int)
        try:
            for u in range(nu):
                for s in range(ns):
                    x[u, s] = x_of_us[(u, s)]
        except KeyError as exc:
            raise MalformedAssignment(f"x(u,s) missing entry {exc}") from exc
    else:
        x = np.asarray(x_of_us, dtype=int)
        if x.shape != (nu, ns):
            raise MalformedAssignment(f"x(u,s) must have shape {(nu, ns)}")
    if np.any(x < 0) or np.any(x >= nx):
        raise MalformedAssignment("x(u,s) value outside the input alphabet")
    return np.clip(p, 0.0, None), x


def _objective(inst, p, x):
    """Exact I(Y;U) - I(U;S) in bits for the assignment (p(u|s), x(u,s))."""
    W = inst.kernel_array
    prior = inst.prior_array
    p_su = p * prior[None, :]                       # joint over (u, s)
    Wp = W[x, np.arange(len(inst.states))[None, :], :]  # (nu, ns, ny)
    p_uy = np.einsum("us,usy->uy", p_su, Wp)
    p_u = p_su.sum(axis=1)
    p_y = p_uy.sum(axis=0)

    def mi(joint, ma, mb):
        outer = ma[:, None] * mb[None, :]
        mask = joint > 0
        return float(np.sum(joint[mask] * np.log2(joint[mask] / outer[mask])))

    return mi(p_uy, p_u, p_y) - mi(p_su, p_u, prior)


def evaluate_assignment(inst: GPInstance, p_u_given_s, x_of_us) -> float:
    p, x = _coerce_assignment(inst, p_u_given_s, x_of_us)
    return _objective(inst, p, x)


def optimize_alternating(inst: GPInstance, restarts: int = 32, seed: int = 0,
                         tol: float = 1e-10, max_iters: int = 2000):
    """Coordinate ascent over (p(u|s), x(u,s)); returns (value, (p, x)).

    The p-step is a softmax minorize-maximize update (monotone); the x-step
    greedily reselects each deterministic input against the current reverse
    channel.  Best value over random restarts wins, lowest restart index on
    ties, so the result depends only on (restarts, seed, tol).
    """
    if restarts < 1 or tol <= 0:
        raise SpecInvalid("need restarts >= 1 and tol > 0")
    W = inst.kernel_array
    prior = inst.prior_array
    nu, ns = inst.aux_size, len(inst.states)
    s_idx = np.arange(ns)

    best_val, best_asg = -math.inf, None
    for r in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(r,)))
        p = rng.dirichlet(np.ones(nu), size=ns).T  # (nu, ns)
        x = rng.integers(0, len(inst.inputs), size=(nu, ns))
        val = _objective(inst, p, x)
        for _ in range(max_iters):
            p_su = p * prior[None, :]
            Wp = W[x, s_idx[None, :], :]
            p_uy = np.einsum("us,usy->uy", p_su, Wp)
            p_y = p_uy.sum(axis=0)
            q = p_uy / np.maximum(p_y[None, :], _LOG_FLOOR)
            logq = np.log(np.maximum(q, _LOG_FLOOR))
            # greedy x-step: per (u,s) pick the input maximizing E[log q(u|Y)]
            scores = np.einsum("xsy,uy->usx", W, logq)
            x = scores.argmax(axis=2)
            # p-step: p(u|s) proportional to exp(E[log q(u|Y)]) at the new x
            Wp = W[x, s_idx[None, :], :]
            t = np.einsum("usy,uy->us", Wp, logq)
            t -= t.max(axis=0, keepdims=True)
            p = np.exp(t)
            p /= p.sum(axis=0, keepdims=True)
            new_val = _objective(inst, p, x)
            if new_val < val - 1e-9:
                raise AssertionError("ascent step decreased the objective")
            if new_val - val < tol:
                val = new_val
                break
            val = new_val
        if val > best_val + 1e-15:
            best_val, best_asg = val, (p, x)
    return best_val, best_asg


def _simplex_grid(dim, steps):
    for comp in itertools.combinations_with_replacement(range(dim), steps):
        v = np.bincount(comp, minlength=dim) / steps
        yield v


def optimize_exhaustive(inst: GPInstance, prob_grid: int = 11):
    """Brute-force oracle: all deterministic x(u,s) maps and all p(u|s) on a
    simplex grid of resolution 1/(prob_grid-1)."""
    nu, ns, nx = inst.aux_size, len(inst.states), len(inst.inputs)
    if nu * ns > 6 or nx > 3 or prob_grid > 21 or prob_grid < 2:
        raise InstanceTooLarge(
            f"exhaustive search limited to |U||S| <= 6, |X| <= 3, grid <= 21")
    cols = [np.array(list(_simplex_grid(nu, prob_grid - 1)))] * ns
    best_val, best_asg = -math.inf, None
    for xs in itertools.product(range(nx), repeat=nu * ns):
        x = np.asarray(xs, dtype=int).reshape(nu, ns)
        for pcols in itertools.product(*[range(len(c)) for c in cols]):
            p = np.stack([cols[s][pcols[s]] for s in range(ns)], axis=1)
            val = _objective(inst, p, x)
            if val > best_val + 1e-15:
                best_val, best_asg = val, (p, x)
    return best_val, best_asg


def binary_nonoise_instance(a_atoms, rcsi: bool = True, aux_size: int = 4) -> GPInstance:
    """Noise-free adder Y = X + A*S with X, S uniform binary symbols.

    With receiver side information the output symbol is the pair (x + a*s, a);
    without it the fading is averaged into the kernel.
    """
    atoms = [(float(a), float(p)) for a, p in a_atoms]
    vals = [a for a, _ in atoms]
    if len(set(vals)) != len(vals) or any(a == 0.0 for a in vals):
        raise DegenerateAtoms("fading atoms must be distinct and non-zero")
    if any(p < 0 for _, p in atoms) or abs(sum(p for _, p in atoms) - 1.0) > _ROW_TOL:
        raise DegenerateAtoms("atom masses must form a probability vector")
    xs = (-1.0, 1.0)
    ss = (-1.0, 1.0)

    def key(v):
        return round(v, 12)

    if rcsi:
        out = sorted({(key(x + a * s), key(a)) for x in xs for s in ss for a in vals})
    else:
        out = sorted({key(x + a * s) for x in xs for s in ss for a in vals})
    index = {y: i for i, y in enumerate(out)}
    W = np.zeros((2, 2, len(out)))
    for ix, x in enumerate(xs):
        for i_s, s in enumerate(ss):
            for a, p in atoms:
                y = (key(x + a * s), key(a)) if rcsi else key(x + a * s)
                W[ix, i_s, index[y]] += p
    return GPInstance(
        states=ss,
        prior=(0.5, 0.5),
        inputs=xs,
        aux_size=aux_size,
        outputs=tuple(out),
        kernel=tuple(tuple(tuple(row) for row in plane) for plane in W),
        rcsi=rcsi,
    )
