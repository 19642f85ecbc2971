"""Batch command line: fit, fit-supervised, predict, eval, info.

Exit codes: 0 success, 1 usage/configuration error, 2 data error,
3 model error. Errors go to stderr as a single ``error: ...`` line.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import persistence
from .engine import MODEL_KINDS, ArtState, fit, predict
from .errors import ConfigError, DataError, ModelError
from .metrics import UNASSIGNED, accuracy, adjusted_rand_index
from .preprocess import load_csv, normalize_apply, normalize_fit_apply
from .supervised import SfamState, sfam_fit, sfam_predict
from .topology import TopoParams, TopoState

AUTO_MAX_EPOCHS = 100

# CLI flag -> hyperparameter name, per model kind
MODEL_FLAGS = {
    "art1": {"L": "L"},
    "fuzzy": {"alpha": "alpha", "beta": "beta"},
    "dvfa": {"alpha": "alpha", "beta": "beta", "rho_lb": "rho_lb"},
    "hypersphere": {"alpha": "alpha", "beta": "beta", "rbar": "rbar"},
    "ellipsoid": {"alpha": "alpha", "beta": "beta", "rbar": "rbar", "mu": "mu"},
    "gaussian": {"sigma_init": "sigma_init"},
    "bayes": {"sigma_init": "sigma_init"},
    "topoart": {"alpha": "alpha", "phi": "phi", "tau": "tau", "beta2": "beta2"},
}
ALL_MODEL_FLAGS = ["alpha", "beta", "rho_lb", "mu", "rbar", "sigma_init", "phi", "tau", "beta2", "L"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _epochs(text: str) -> int | None:
    if text == "auto":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or 'auto'") from None
    if value < 1:
        raise argparse.ArgumentTypeError("epochs must be >= 1")
    return value


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", required=True, choices=sorted(MODEL_FLAGS))
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--rho", required=True, type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--rho-lb", dest="rho_lb", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--rbar", type=float)
    p.add_argument("--sigma-init", dest="sigma_init", type=float)
    p.add_argument("--phi", type=int)
    p.add_argument("--tau", type=int)
    p.add_argument("--beta2", type=float)
    p.add_argument("--L", dest="L", type=float)
    p.add_argument("--diagonal", action="store_true", help="diagonal covariance (bayes only)")
    p.add_argument("--epochs", type=_epochs, default=None, help="integer or 'auto' (default)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", required=True, type=Path)
    p.add_argument("--labels-out", dest="labels_out", type=Path)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="artkit", description="Adaptive resonance theory toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="train an unsupervised model")
    _add_model_args(p)
    p.add_argument("--label-column", dest="label_column", help="column to ignore while clustering")

    p = sub.add_parser("fit-supervised", help="train a simplified ARTMAP classifier")
    _add_model_args(p)
    p.add_argument("--label-column", dest="label_column", required=True)
    p.add_argument("--mt", choices=["plus", "minus"], default="plus")
    p.add_argument("--epsilon", type=float, default=0.001, help="match tracking magnitude")

    p = sub.add_parser("predict", help="label rows with a trained model")
    p.add_argument("--model-file", dest="model_file", required=True, type=Path)
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--output", required=True, type=Path)
    p.add_argument("--policy", choices=["strict", "nearest"], default="strict")
    p.add_argument("--label-column", dest="label_column", help="column to ignore")

    p = sub.add_parser("eval", help="score predictions against ground truth")
    p.add_argument("--pred", required=True, type=Path)
    p.add_argument("--truth", required=True, type=Path)
    p.add_argument("--metric", choices=["ari", "accuracy"], required=True)

    p = sub.add_parser("info", help="summarize a model file")
    p.add_argument("--model-file", dest="model_file", required=True, type=Path)
    return parser


def _hyperparameters(args) -> dict:
    allowed = MODEL_FLAGS[args.model]
    params = {"rho": args.rho}
    for flag in ALL_MODEL_FLAGS:
        value = getattr(args, flag)
        if value is None:
            continue
        if flag not in allowed:
            raise UsageError(f"--{flag.replace('_', '-')} does not apply to model {args.model}")
        params[allowed[flag]] = value
    if args.diagonal:
        if args.model != "bayes":
            raise UsageError("--diagonal applies to model bayes only")
        params["diagonal"] = True
    return params


def _prepare_training(args):
    # flags and hyperparameters are validated before any data is read
    params = _hyperparameters(args)
    model = TopoParams(**params) if args.model == "topoart" else MODEL_KINDS[args.model](**params)
    data = load_csv(args.input, args.label_column)
    if args.model == "art1":
        # binary data is used as-is; scaling would turn constant bits into 0.5
        X, ranges = data.X, None
    else:
        X, ranges = normalize_fit_apply(data.X)
    state = TopoState(model, data.dim) if args.model == "topoart" else ArtState(model, data.dim)
    return data, X, ranges, state


def _write_labels(path: Path, labels) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["label"])
        for v in labels:
            w.writerow([UNASSIGNED if v is None else v])


def _topo_labels(state: TopoState, X) -> list:
    if not any(state.b.permanent):
        return [None] * len(X)
    return [state.predict(x) for x in X]


def cmd_fit(args) -> int:
    data, X, ranges, state = _prepare_training(args)
    max_epochs = args.epochs or AUTO_MAX_EPOCHS
    state, labels, epochs = fit(state, X, max_epochs, args.seed)
    if isinstance(state, TopoState):
        labels = _topo_labels(state, X)
    persistence.save(state, args.output, ranges)
    if args.labels_out:
        _write_labels(args.labels_out, labels)
    print(f"categories={state.n_categories}")
    print(f"epochs={epochs}")
    return 0


def cmd_fit_supervised(args) -> int:
    if args.model == "topoart" or MODEL_KINDS[args.model].uses_clusters:
        raise UsageError(f"{args.model} cannot be used with fit-supervised")
    if not args.epsilon > 0:
        raise UsageError("--epsilon is a magnitude and must be > 0")
    data, X, ranges, inner = _prepare_training(args)
    eps = args.epsilon if args.mt == "plus" else -args.epsilon
    state = SfamState(inner, epsilon=eps)
    max_epochs = args.epochs or AUTO_MAX_EPOCHS
    state, winners, epochs = sfam_fit(state, X, data.labels, max_epochs, args.seed)
    persistence.save(state, args.output, ranges, data.label_names)
    if args.labels_out:
        _write_labels(args.labels_out, [data.label_names[sfam_predict(state, x)] for x in X])
    print(f"categories={len(state.inner.categories)}")
    print(f"epochs={epochs}")
    return 0


def cmd_predict(args) -> int:
    mf = persistence.load_model_file(args.model_file)
    data = load_csv(args.input, args.label_column)
    X = data.X if mf.ranges is None else normalize_apply(mf.ranges, data.X)
    state = mf.state
    if isinstance(state, SfamState):
        strict = args.policy == "strict"
        ids = [sfam_predict(state, x, strict=strict) for x in X]
        labels = [None if i is None else mf.label_names[i] for i in ids]
    elif isinstance(state, TopoState):
        labels = _topo_labels(state, X)
    else:
        labels = [predict(state, x, args.policy) for x in X]
    _write_labels(args.output, labels)
    return 0


def _read_label_column(path: Path) -> list[str]:
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise DataError(f"{path}: empty file")
    header = rows[0]
    col = header.index("label") if "label" in header else 0
    return [r[col].strip() for r in rows[1:]]


def _factorize(values: list[str]) -> list[int]:
    ids: dict[str, int] = {}
    return [UNASSIGNED if v == str(UNASSIGNED) else ids.setdefault(v, len(ids)) for v in values]


def cmd_eval(args) -> int:
    pred = _read_label_column(args.pred)
    truth = _read_label_column(args.truth)
    if len(pred) != len(truth):
        raise DataError(f"length mismatch: {len(pred)} predictions vs {len(truth)} labels")
    if args.metric == "ari":
        value = adjusted_rand_index(_factorize(pred), _factorize(truth))
    else:
        p = [UNASSIGNED if v == str(UNASSIGNED) else v for v in pred]
        value = accuracy(p, truth)
    print(f"metric={value!r}")
    return 0


def cmd_info(args) -> int:
    mf = persistence.load_model_file(args.model_file)
    state = mf.state
    if isinstance(state, TopoState):
        print(f"kind={state.kind}")
        print(f"d={state.dim}")
        for name, module in (("a", state.a), ("b", state.b)):
            sizes = np.array([c.w.size // 2 - c.w.sum() for c in module.categories])
            print(f"module_{name}_categories={len(module.categories)}")
            print(f"module_{name}_permanent={sum(module.permanent)}")
            print(f"module_{name}_edges={len(module.edges)}")
            _print_sizes(sizes, prefix=f"module_{name}_")
        return 0
    inner = state.inner if isinstance(state, SfamState) else state
    print(f"kind={inner.kind}" + (" (simplified ARTMAP)" if isinstance(state, SfamState) else ""))
    print(f"d={inner.dim}")
    print(f"categories={len(inner.categories)}")
    if inner.cluster_map is not None:
        print(f"clusters={len(set(inner.cluster_map))}")
    if isinstance(state, SfamState):
        print(f"classes={len(set(state.class_map))}")
    _print_sizes(np.array([inner.model.category_size(c) for c in inner.categories]))
    return 0


def _print_sizes(sizes: np.ndarray, prefix: str = "") -> None:
    if sizes.size == 0:
        return
    print(f"{prefix}size_min={sizes.min()!r}")
    print(f"{prefix}size_mean={sizes.mean()!r}")
    print(f"{prefix}size_max={sizes.max()!r}")


COMMANDS = {
    "fit": cmd_fit,
    "fit-supervised": cmd_fit_supervised,
    "predict": cmd_predict,
    "eval": cmd_eval,
    "info": cmd_info,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
