"""JSON state files.

A state file is an object with ``dims`` (``[dA, dB]``), ``kind`` (``"pure"`` or
``"density"``) and ``data``: a flat list of ``[re, im]`` pairs holding the
``dA*dB`` amplitudes, or the ``(dA*dB)**2`` density-matrix entries in
row-major order.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .oracles import Theorem4Params, theorem4_state
from .states import DensityMatrix, InvalidStateError, PureState, product_state


def _complex_list(data, n: int) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise InvalidStateError("data must be a list of [re, im] pairs") from None
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidStateError("data must be a list of [re, im] pairs")
    if arr.shape[0] != n:
        raise InvalidStateError(f"dimension mismatch: expected {n} entries, got {arr.shape[0]}")
    return arr[:, 0] + 1j * arr[:, 1]


def parse_state(obj: dict) -> PureState | DensityMatrix:
    if not isinstance(obj, dict):
        raise InvalidStateError("state file must hold a JSON object")
    missing = {"dims", "kind", "data"} - obj.keys()
    if missing:
        raise InvalidStateError(f"state file lacks fields: {', '.join(sorted(missing))}")
    dims = obj["dims"]
    if not (isinstance(dims, list) and len(dims) == 2 and all(isinstance(d, int) and d > 0 for d in dims)):
        raise InvalidStateError(f"dims must be two positive integers, got {dims!r}")
    n = dims[0] * dims[1]
    if obj["kind"] == "pure":
        return PureState(tuple(dims), _complex_list(obj["data"], n))
    if obj["kind"] == "density":
        return DensityMatrix(tuple(dims), _complex_list(obj["data"], n * n).reshape(n, n))
    raise InvalidStateError(f"kind must be 'pure' or 'density', got {obj['kind']!r}")


def load_state(path) -> tuple[PureState | DensityMatrix, str]:
    """Parse a state file; also returns the SHA-256 digest of its bytes."""
    raw = Path(path).read_bytes()
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InvalidStateError(f"invalid JSON: {exc}") from None
    return parse_state(obj), hashlib.sha256(raw).hexdigest()


def _pairs(z: np.ndarray) -> list:
    return [[float(x.real), float(x.imag)] for x in np.ravel(z)]


def state_to_dict(state: PureState | DensityMatrix) -> dict:
    if isinstance(state, PureState):
        return {"dims": list(state.dims), "kind": "pure", "data": _pairs(state.amplitudes)}
    return {"dims": list(state.dims), "kind": "density", "data": _pairs(state.matrix)}


def write_state(path, state) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state), indent=1) + "\n")


def werner_state(p: float) -> DensityMatrix:
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return DensityMatrix((2, 2), p * np.outer(phi, phi) + (1 - p) * np.eye(4) / 4)


def fixture_states(seed: int = 0) -> dict:
    """Named fixture states; the random ones depend only on ``seed``."""
    rng = np.random.default_rng(seed)
    bell = PureState((2, 2), np.array([1, 0, 0, 1]) / np.sqrt(2))
    out = {
        "bell": bell,
        "product": product_state((2, 2), 0, 1),
        "werner_p0.8": werner_state(0.8),
        "separable": DensityMatrix((2, 2), np.diag(rng.dirichlet(np.ones(4)))),
        "theorem4_eta0.5_c1sq0.5": theorem4_state(Theorem4Params.from_c1sq(0.5, 0.5)),
    }
    return out


def write_fixtures(outdir, seed: int = 0) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, state in fixture_states(seed).items():
        path = outdir / f"{name}.json"
        write_state(path, state)
        paths.append(path)
    return paths
