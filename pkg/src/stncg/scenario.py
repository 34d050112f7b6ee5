"""Problem instances: demands, compute capacities, weights and hop limits.

Canonical unit inside the package is Gbit per slot. Link and compute rates
given in Gbit/s are multiplied by ``slot_duration`` when a scenario is
loaded; GB demands are converted with a factor of 8.

Demand stream
-------------
Demands are drawn from a portable stream that does not depend on numpy's
distribution code:

1. ``numpy.random.Philox(seed).random_raw(2 * ceil(n / 2))`` yields uint64
   words (Philox-4x64-10, counter based, stream is version stable).
2. Each word ``w`` becomes ``u = ((w >> 11) + 0.5) * 2**-53``, a double in
   the open interval (0, 1).
3. Consecutive pairs ``(u1, u2)`` give two standard normals by Box-Muller:
   ``r = sqrt(-2 ln u1)``, ``z1 = r cos(2 pi u2)``, ``z2 = r sin(2 pi u2)``.
4. ``D = exp(mu + sigma * z)`` with ``mu = ln(mean) - sigma**2 / 2``; the
   first ``n`` values are kept.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .constellation import Topology, TopologyError, build_walker_star

GB_TO_GBIT = 8.0

# reference instance parameters
REFERENCE_ISL_RATE = 5.0  # Gbit/s
REFERENCE_SGL_RATE = 1.0  # Gbit/s
REFERENCE_CYCLES_PER_SEC = 1e9
REFERENCE_PROCESSING_DENSITY = 1e8  # cycles per Gbit
REFERENCE_WEIGHTS = (0.6, 0.3, 0.1)
REFERENCE_DEMAND_MEAN = 20.0
REFERENCE_DEMAND_SIGMA = 1.3


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class DemandModel:
    """Lognormal demand parameters.

    ``sigma_mode="log"`` reads ``sigma`` as the std of the underlying normal;
    ``"absolute"`` reads it as the std of the demand itself, in ``unit``.
    """

    mean: float
    sigma: float
    seed: int = 0
    unit: str = "Gbit"
    sigma_mode: str = "log"

    def __post_init__(self):
        if not self.mean > 0:
            raise ScenarioError(f"demand mean must be positive, got {self.mean}")
        if not self.sigma >= 0:
            raise ScenarioError(f"demand sigma must be nonnegative, got {self.sigma}")
        if self.unit not in ("Gbit", "GB"):
            raise ScenarioError(f"unknown demand unit {self.unit!r}")
        if self.sigma_mode not in ("log", "absolute"):
            raise ScenarioError(f"unknown sigma_mode {self.sigma_mode!r}")
        if self.seed < 0:
            raise ScenarioError("seed must be a nonnegative integer")

    def log_params(self) -> tuple[float, float]:
        """Location and scale of the underlying normal (in the model's unit)."""
        if self.sigma_mode == "log":
            s = self.sigma
        else:
            s = math.sqrt(math.log1p((self.sigma / self.mean) ** 2))
        return math.log(self.mean) - 0.5 * s * s, s


@dataclass(frozen=True)
class Scenario:
    topology: Topology
    demands: tuple[float, ...]
    compute_capacity: tuple[float, ...]
    weights: tuple[float, float, float] = REFERENCE_WEIGHTS
    hops: tuple[int, int] = (5, 5)
    slot_duration: float = 1.0
    demand_model: DemandModel | None = field(default=None, compare=False)

    def __post_init__(self):
        problems = scenario_problems(self)
        if problems:
            raise ScenarioError("; ".join(problems))

    @property
    def n_satellites(self) -> int:
        return self.topology.n_satellites

    @property
    def hs(self) -> int:
        return self.hops[0]

    @property
    def hg(self) -> int:
        return self.hops[1]

    def demand(self, sat: int) -> float:
        return self.demands[sat - 1]

    def capacity(self, sat: int) -> float:
        return self.compute_capacity[sat - 1]

    def with_hops(self, hs: int, hg: int | None = None) -> "Scenario":
        return replace(self, hops=(int(hs), int(hs if hg is None else hg)))

    def with_demands(self, demands: Sequence[float]) -> "Scenario":
        return replace(self, demands=tuple(float(d) for d in demands), demand_model=None)


def scenario_problems(sc: Scenario) -> list[str]:
    out = []
    n = sc.topology.n_satellites
    if len(sc.demands) != n:
        out.append(f"expected {n} demands, got {len(sc.demands)}")
    if len(sc.compute_capacity) != n:
        out.append(f"expected {n} compute capacities, got {len(sc.compute_capacity)}")
    if any(not (d >= 0 and math.isfinite(d)) for d in sc.demands):
        out.append("demands must be finite and nonnegative")
    if any(not (c > 0 and math.isfinite(c)) for c in sc.compute_capacity):
        out.append("compute capacities must be finite and positive")
    if len(sc.weights) != 3 or any(not w >= 0 for w in sc.weights):
        out.append("weights (a, b, c) must be three nonnegative numbers")
    if len(sc.hops) != 2 or any(int(h) != h or h < 0 for h in sc.hops):
        out.append("hop limits must be two nonnegative integers")
    if not sc.slot_duration > 0:
        out.append("slot_duration must be positive")
    return out


def derive_compute_capacity(
    cycles_per_sec: float, processing_density: float, slot_duration: float = 1.0
) -> float:
    """Data volume (Gbit) a satellite can process in one slot."""
    if not (cycles_per_sec > 0 and processing_density > 0 and slot_duration > 0):
        raise ScenarioError("cycle rate, processing density and slot length must be positive")
    return cycles_per_sec / processing_density * slot_duration


def standard_normals(seed: int, n: int) -> np.ndarray:
    """First ``n`` standard normals of the documented Philox/Box-Muller stream."""
    if n <= 0:
        raise ScenarioError(f"need a positive sample count, got {n}")
    m = (n + 1) // 2
    words = np.random.Philox(int(seed)).random_raw(2 * m).astype(np.uint64)
    u = ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    u1, u2 = u[0::2], u[1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    theta = 2.0 * np.pi * u2
    z = np.empty(2 * m)
    z[0::2] = r * np.cos(theta)
    z[1::2] = r * np.sin(theta)
    return z[:n]


def generate_demands(model: DemandModel, n: int) -> np.ndarray:
    """Lognormal demands in Gbit (GB models are converted)."""
    if n <= 0:
        raise ScenarioError(f"need a positive sample count, got {n}")
    mu, s = model.log_params()
    if s == 0:
        d = np.full(n, model.mean)
    else:
        d = np.exp(mu + s * standard_normals(model.seed, n))
    return d * (GB_TO_GBIT if model.unit == "GB" else 1.0)


def reference_topology(
    isl_rate: float = REFERENCE_ISL_RATE,
    sgl_rate: float = REFERENCE_SGL_RATE,
    slot_duration: float = 1.0,
    **kwargs,
) -> Topology:
    """The 30-satellite, 6-plane grid with one gateway per plane."""
    return build_walker_star(
        6, 5, kwargs.pop("gateway_phase", 0), kwargs.pop("seam_wrap", True),
        isl_rate * slot_duration, sgl_rate * slot_duration, **kwargs,
    )


def reference_scenario(
    seed: int = 0,
    hops: tuple[int, int] = (5, 5),
    mean: float = REFERENCE_DEMAND_MEAN,
    sigma: float = REFERENCE_DEMAND_SIGMA,
    unit: str = "Gbit",
    sigma_mode: str = "log",
    topology: Topology | None = None,
) -> Scenario:
    """Reference 6x5 instance with lognormal demands drawn from ``seed``."""
    topo = topology or reference_topology()
    model = DemandModel(mean, sigma, seed, unit, sigma_mode)
    demands = generate_demands(model, topo.n_satellites)
    cap = derive_compute_capacity(REFERENCE_CYCLES_PER_SEC, REFERENCE_PROCESSING_DENSITY)
    return Scenario(
        topology=topo,
        demands=tuple(float(d) for d in demands),
        compute_capacity=(cap,) * topo.n_satellites,
        weights=REFERENCE_WEIGHTS,
        hops=(int(hops[0]), int(hops[1])),
        demand_model=model,
    )


def _require(doc: dict, key: str) -> Any:
    if key not in doc:
        raise ScenarioError(f"scenario document is missing {key!r}")
    return doc[key]


def _load_topology(desc: Any, caps: dict, slot: float, base: Path | None) -> Topology:
    if isinstance(desc, str):
        desc = {"file": desc}
    if not isinstance(desc, dict):
        raise ScenarioError("topology must be an object or a file reference")
    if "file" in desc:
        path = Path(desc["file"])
        if base is not None and not path.is_absolute():
            path = base / path
        if not path.exists():
            raise ScenarioError(f"unknown topology reference {desc['file']!r}")
        return Topology.from_dict(json.loads(path.read_text()))
    if "walker_star" in desc:
        ws = dict(desc["walker_star"])
        isl = float(caps.get("isl", REFERENCE_ISL_RATE)) * slot
        sgl = float(caps.get("sgl", REFERENCE_SGL_RATE)) * slot
        try:
            return build_walker_star(
                int(ws.get("planes", 6)),
                int(ws.get("sats_per_plane", 5)),
                int(ws.get("gateway_phase", 0)),
                bool(ws.get("seam_wrap", True)),
                isl,
                sgl,
                ws.get("duplex_mode", "shared"),
            )
        except TopologyError as exc:
            raise ScenarioError(str(exc)) from exc
    if "edges" in desc:
        return Topology.from_dict(desc)
    raise ScenarioError("topology needs one of 'file', 'walker_star' or inline 'edges'")


def load_scenario(document: dict | str | Path, base_dir: Path | None = None) -> Scenario:
    """Validate a scenario document and convert it to canonical units.

    ``document`` may be a parsed dict, a JSON string, or a path to a JSON
    file. Inline topologies carry per-slot edge capacities; a ``walker_star``
    block is built from ``capacities.isl``/``capacities.sgl`` rates.
    """
    if isinstance(document, Path) or (
        isinstance(document, str) and not document.lstrip().startswith("{")
    ):
        path = Path(document)
        base_dir = base_dir or path.parent
        document = json.loads(path.read_text())
    elif isinstance(document, str):
        document = json.loads(document)
    if not isinstance(document, dict):
        raise ScenarioError("scenario document must be a JSON object")

    slot = float(document.get("slot_duration", 1.0))
    if not slot > 0:
        raise ScenarioError("slot_duration must be positive")
    caps = document.get("capacities", {}) or {}
    topo = _load_topology(_require(document, "topology"), caps, slot, base_dir)
    n = topo.n_satellites

    raw = _require(document, "demands")
    model = None
    if isinstance(raw, dict):
        unit = raw.get("unit", "Gbit")
        try:
            model = DemandModel(
                float(_require(raw, "mean")),
                float(raw.get("sigma", REFERENCE_DEMAND_SIGMA)),
                int(raw.get("seed", 0)),
                unit,
                raw.get("sigma_mode", "log"),
            )
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"bad demand model: {exc}") from exc
        demands = tuple(float(d) for d in generate_demands(model, n))
    elif isinstance(raw, list):
        unit = document.get("demand_unit", "Gbit")
        if unit not in ("Gbit", "GB"):
            raise ScenarioError(f"unit mismatch: demand_unit {unit!r} is neither Gbit nor GB")
        scale = GB_TO_GBIT if unit == "GB" else 1.0
        demands = tuple(float(d) * scale for d in raw)
    else:
        raise ScenarioError("demands must be a list or a lognormal model object")

    if "compute" in caps:
        comp = caps["compute"]
        compute = tuple(float(c) for c in comp) if isinstance(comp, list) else (float(comp),) * n
    else:
        per_sat = derive_compute_capacity(
            float(caps.get("cycles_per_sec", REFERENCE_CYCLES_PER_SEC)),
            float(caps.get("processing_density", REFERENCE_PROCESSING_DENSITY)),
            slot,
        )
        compute = (per_sat,) * n

    weights = tuple(float(w) for w in document.get("weights", REFERENCE_WEIGHTS))
    hops = document.get("hops", [5, 5])
    if len(weights) != 3:
        raise ScenarioError("weights must be [a, b, c]")
    if len(hops) != 2 or any(isinstance(h, float) and not h.is_integer() for h in hops):
        raise ScenarioError("hops must be [Hs, Hg] integers")
    return Scenario(
        topology=topo,
        demands=demands,
        compute_capacity=compute,
        weights=weights,  # type: ignore[arg-type]
        hops=(int(hops[0]), int(hops[1])),
        slot_duration=slot,
        demand_model=model,
    )


def scenario_to_dict(sc: Scenario) -> dict:
    """Self-contained document: inline topology, explicit per-slot values."""
    return {
        "topology": sc.topology.to_dict(),
        "demands": list(sc.demands),
        "demand_unit": "Gbit",
        "capacities": {"compute": list(sc.compute_capacity)},
        "weights": list(sc.weights),
        "hops": list(sc.hops),
        "slot_duration": sc.slot_duration,
    }


def save_scenario(sc: Scenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(sc), indent=2))
