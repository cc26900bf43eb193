"""Config-file serialization: kernels, fitted models, fit results and
benchmark run configs as nested key-value YAML.

Round-trips are lossless: floats are written with full repr precision and
every HyperParam field (name, value, lower, upper, scale, shift) is kept.
A fitted model stores its kernel, training data and the nugget actually
used; the Cholesky factor is recomputed on load at that exact nugget, so
a loaded model reproduces the saved one's predictions bit for bit.
"""

from __future__ import annotations

import numpy as np
import yaml

from .benchmark import MethodSpec, TestFunction, default_methods, step_function
from .benchmark import nonstationary_function
from .domain import Box
from .errors import ConfigError
from .gp import FittedGP, TrainingSet, fit
from .kernels import (
    GibbsKernel,
    HyperParam,
    Kernel,
    LS_KINDS,
    NeuralNet,
    NeuralNetShifted,
    WARP_KINDS,
    WarpedKernel,
)
from .kernels.base import (
    OuterFnKernel,
    ProductKernel,
    ScaledKernel,
    ShiftedKernel,
    SumKernel,
)
from .kernels.gibbs import ConstantLS, LengthScaleFn, _AxisLS
from .kernels.stationary import (
    Exponential,
    Matern32,
    Matern52,
    SquaredExponential,
    _TensorStationary,
)
from .kernels.warping import PeriodicPairWarp, WarpMap, _SigmoidWarp
from .mle import MLResult

_STATIONARY = {c.kind: c for c in
               (Exponential, Matern32, Matern52, SquaredExponential)}


def _param_to_dict(p: HyperParam) -> dict:
    return {"name": p.name, "value": float(p.value), "lower": float(p.lower),
            "upper": float(p.upper), "scale": p.scale, "shift": float(p.shift)}


def _param_from_dict(d: dict) -> HyperParam:
    try:
        return HyperParam(str(d["name"]), float(d["value"]),
                          float(d["lower"]), float(d["upper"]),
                          str(d.get("scale", "linear")),
                          float(d.get("shift", 0.0)))
    except (KeyError, TypeError) as e:
        raise ConfigError(f"bad parameter entry {d!r}") from e


def _lsfn_to_dict(f: LengthScaleFn) -> dict:
    out = {"kind": f.kind, "params": [_param_to_dict(p) for p in f.params]}
    if isinstance(f, _AxisLS):
        out["axis"] = f.axis
    return out


def _lsfn_from_dict(d: dict) -> LengthScaleFn:
    kind = d.get("kind")
    if kind not in LS_KINDS:
        raise ConfigError(f"unknown lengthscale kind {kind!r}")
    params = {p["name"]: _param_from_dict(p) for p in d.get("params", [])}
    if kind == "Constant":
        if "c2" not in params:
            raise ConfigError("Constant lengthscale needs c2")
        return ConstantLS(c2=params["c2"])
    if "c1" not in params or "c2" not in params:
        raise ConfigError(f"{kind} lengthscale needs c1 and c2")
    return LS_KINDS[kind](c1=params["c1"], c2=params["c2"],
                          axis=int(d.get("axis", 0)))


def _warp_to_dict(w: WarpMap) -> dict:
    out = {"kind": w.kind, "params": [_param_to_dict(p) for p in w.params]}
    if isinstance(w, _SigmoidWarp):
        out["axis"] = w.axis
    if isinstance(w, PeriodicPairWarp):
        out["period"] = float(w.period)
    return out


def _warp_from_dict(d: dict) -> WarpMap:
    kind = d.get("kind")
    if kind not in WARP_KINDS:
        raise ConfigError(f"unknown warp kind {kind!r}")
    if kind == "PeriodicPair":
        if "period" not in d:
            raise ConfigError("PeriodicPair warp needs period")
        return PeriodicPairWarp(period=float(d["period"]))
    params = {p["name"]: _param_from_dict(p) for p in d.get("params", [])}
    if "c1" not in params:
        raise ConfigError(f"{kind} warp needs c1")
    return WARP_KINDS[kind](c1=params["c1"], axis=int(d.get("axis", 0)))


def kernel_to_dict(k: Kernel) -> dict:
    """Nested dict form of a kernel; raises ConfigError for kernels that
    wrap arbitrary Python functions (they cannot be written to a file)."""
    if isinstance(k, OuterFnKernel):
        raise ConfigError(
            "a kernel wrapping a user function cannot be serialized")
    if isinstance(k, _TensorStationary):
        return {"kind": k.kind, "dim": k.dim,
                "params": [_param_to_dict(p) for p in k.params]}
    if isinstance(k, NeuralNet):  # covers NeuralNetShifted
        return {"kind": k.kind, "dim": k.dim,
                "params": [_param_to_dict(p) for p in k.params]}
    if isinstance(k, GibbsKernel):
        return {"kind": k.kind, "dim": k.dim,
                "params": [_param_to_dict(k.params[0])],
                "lsfn": _lsfn_to_dict(k.lsfn)}
    if isinstance(k, WarpedKernel):
        return {"kind": k.kind, "dim": k.dim,
                "warp": _warp_to_dict(k.warp),
                "child": kernel_to_dict(k.child)}
    if isinstance(k, (SumKernel, ProductKernel)):
        return {"kind": k.kind, "dim": k.dim,
                "children": [kernel_to_dict(k.k1), kernel_to_dict(k.k2)]}
    if isinstance(k, ScaledKernel):
        return {"kind": k.kind, "c": float(k.c),
                "child": kernel_to_dict(k.child)}
    if isinstance(k, ShiftedKernel):
        return {"kind": k.kind, "c": float(k.c),
                "child": kernel_to_dict(k.child)}
    raise ConfigError(f"cannot serialize kernel of type {type(k).__name__}")


def kernel_from_dict(d: dict) -> Kernel:
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigError(f"kernel entry must be a mapping with kind: {d!r}")
    kind = d["kind"]
    if kind in _STATIONARY:
        dim = int(d["dim"])
        params = [_param_from_dict(p) for p in d.get("params", [])]
        if len(params) != dim + 1:
            raise ConfigError(
                f"{kind} in dimension {dim} needs {dim + 1} parameters")
        return _STATIONARY[kind](dim, sigma2=params[0],
                                 lengthscales=params[1:])
    if kind in ("NeuralNet", "NeuralNetShifted"):
        dim = int(d["dim"])
        params = [_param_from_dict(p) for p in d.get("params", [])]
        want = dim + 2 + (dim if kind == "NeuralNetShifted" else 0)
        if len(params) != want:
            raise ConfigError(
                f"{kind} in dimension {dim} needs {want} parameters")
        if kind == "NeuralNet":
            return NeuralNet(dim, sigma2=params[0], sigmas=params[1:])
        return NeuralNetShifted(dim, sigma2=params[0],
                                sigmas=params[1:dim + 2],
                                tau=params[dim + 2:])
    if kind == "Gibbs":
        dim = int(d["dim"])
        params = [_param_from_dict(p) for p in d.get("params", [])]
        if len(params) != 1:
            raise ConfigError("Gibbs needs exactly the variance parameter")
        if "lsfn" not in d:
            raise ConfigError("Gibbs needs lsfn")
        return GibbsKernel(dim, _lsfn_from_dict(d["lsfn"]), sigma2=params[0])
    if kind == "Warped":
        if "warp" not in d or "child" not in d:
            raise ConfigError("Warped needs warp and child")
        warp = _warp_from_dict(d["warp"])
        child = kernel_from_dict(d["child"])
        return WarpedKernel(warp, child,
                            dim=int(d["dim"]) if "dim" in d else None)
    if kind in ("Sum", "Product"):
        children = d.get("children", [])
        if len(children) != 2:
            raise ConfigError(f"{kind} needs exactly two children")
        k1, k2 = (kernel_from_dict(c) for c in children)
        return SumKernel(k1, k2) if kind == "Sum" else ProductKernel(k1, k2)
    if kind == "Scaled":
        return ScaledKernel(float(d["c"]), kernel_from_dict(d["child"]))
    if kind == "ShiftedConst":
        return ShiftedKernel(kernel_from_dict(d["child"]), float(d["c"]))
    raise ConfigError(f"unknown kernel kind {kind!r}")


def _box_to_dict(box: Box) -> dict:
    return {"lower": [float(v) for v in box.lower],
            "upper": [float(v) for v in box.upper]}


def _box_from_dict(d: dict) -> Box:
    try:
        return Box(tuple(float(v) for v in d["lower"]),
                   tuple(float(v) for v in d["upper"]))
    except (KeyError, TypeError) as e:
        raise ConfigError(f"bad box entry {d!r}") from e


def model_to_dict(gp: FittedGP) -> dict:
    ts = gp.training
    return {
        "kernel": kernel_to_dict(gp.kernel),
        "mu_hat": float(gp.mu_hat),
        "jitter_used": float(gp.jitter_used),
        "training": {
            "X": [[float(v) for v in row] for row in ts.X],
            "y": [float(v) for v in ts.y],
            "box": _box_to_dict(ts.box) if ts.box is not None else None,
        },
    }


def model_from_dict(d: dict) -> FittedGP:
    try:
        tr = d["training"]
        X = np.array(tr["X"], dtype=float)
        y = np.array(tr["y"], dtype=float)
        box = _box_from_dict(tr["box"]) if tr.get("box") else None
        kernel = kernel_from_dict(d["kernel"])
        jitter = float(d["jitter_used"])
    except (KeyError, TypeError) as e:
        raise ConfigError(f"bad model config: {e}") from e
    return fit(kernel, TrainingSet(X, y, box=box), fixed_jitter=jitter)


def mlresult_to_dict(res: MLResult) -> dict:
    return {
        "kernel": kernel_to_dict(res.kernel),
        "loglik": float(res.loglik),
        "converged": bool(res.converged),
        "at_boundary": list(res.at_boundary),
        "n_evals": int(res.n_evals),
        "seed": int(res.seed),
        "values": {k: float(v) for k, v in res.values.items()},
        "restarts": [
            {"index": r.index, "loglik": float(r.loglik),
             "converged": bool(r.converged), "n_evals": int(r.n_evals),
             "values": [float(v) for v in r.values]}
            for r in res.restarts
        ],
    }


def save_yaml(data: dict, path) -> None:
    with open(path, "w") as fh:
        yaml.safe_dump(data, fh, sort_keys=False)


def load_yaml(path) -> dict:
    with open(path) as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as e:
            raise ConfigError(f"{path}: not valid YAML: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")
    return data


def save_kernel(k: Kernel, path) -> None:
    save_yaml(kernel_to_dict(k), path)


def load_kernel(path) -> Kernel:
    return kernel_from_dict(load_yaml(path))


def save_model(gp: FittedGP, path) -> None:
    save_yaml(model_to_dict(gp), path)


def load_model(path) -> FittedGP:
    return model_from_dict(load_yaml(path))


# -- benchmark run configs ---------------------------------------------------


def _tf_from_entry(entry: dict) -> TestFunction:
    if not isinstance(entry, dict) or "kind" not in entry:
        raise ConfigError(f"function entry must be a mapping with kind: "
                          f"{entry!r}")
    kind = entry["kind"]
    if kind == "StepFn":
        d = int(entry.get("d", 2))
        if not 1 <= d <= 10:
            raise ConfigError(f"d must be in 1..10, got {d}")
        domain = (_box_from_dict(entry["domain"])
                  if "domain" in entry else None)
        return step_function(d, domain)
    if kind == "NonstatFn":
        return nonstationary_function()
    raise ConfigError(
        f"config files support StepFn and NonstatFn, got {kind!r}")


def _methods_from_entry(labels) -> tuple[MethodSpec, ...]:
    available = {m.label: m for m in default_methods()}
    if labels is None:
        return tuple(available.values())
    out = []
    for label in labels:
        if label not in available:
            raise ConfigError(
                f"unknown method {label!r}; choose from "
                f"{sorted(available)}")
        out.append(available[label])
    return tuple(out)


class RunConfig:
    """Validated benchmark run settings loaded from a YAML mapping."""

    def __init__(self, data: dict):
        if not isinstance(data, dict):
            raise ConfigError("run config must be a mapping")
        known = {"functions", "methods", "replicates", "n_train", "n_t",
                 "master_seed", "n_restarts", "jobs", "out_dir",
                 "results", "summary"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        fns = data.get("functions")
        if not fns:
            raise ConfigError("config needs at least one entry in functions")
        self.functions = tuple(_tf_from_entry(e) for e in fns)
        self.methods = _methods_from_entry(data.get("methods"))
        self.replicates = int(data.get("replicates", 20))
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        self.n_train = (int(data["n_train"])
                        if data.get("n_train") is not None else None)
        if self.n_train is not None and self.n_train < 2:
            raise ConfigError("n_train must be >= 2")
        self.n_t = int(data.get("n_t", 1000))
        if self.n_t < 1:
            raise ConfigError("n_t must be >= 1")
        self.master_seed = int(data.get("master_seed", 0))
        self.n_restarts = int(data.get("n_restarts", 10))
        if self.n_restarts < 1:
            raise ConfigError("n_restarts must be >= 1")
        # 0 means "use all available cores", resolved at run time
        self.jobs = int(data.get("jobs", 0))
        if self.jobs < 0:
            raise ConfigError("jobs must be >= 0")
        self.out_dir = str(data.get("out_dir", "."))
        self.results = str(data.get("results", "results.csv"))
        self.summary = str(data.get("summary", "summary.csv"))


def load_run_config(path) -> RunConfig:
    return RunConfig(load_yaml(path))
