"""Command-line front end: JSON in, certificate JSON out, strict exit codes.

Exit codes: 0 success, 1 usage or schema error, 2 retries exhausted while
looking for a transversal line, 3 decomposition failure.  Results go to
stdout as a single JSON document embedding the full configuration and seed;
diagnostics go to stderr.  Floats serialize with shortest round-trip
precision, so rerunning the printed command reproduces the output byte for
byte.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, replace
from importlib import resources

import jsonschema
import numpy as np
from referencing import Registry, Resource

from . import __version__
from .algebra import (
    MEMBERSHIP_TOL,
    RANK_TOL,
    TAU_PAIR,
    TAU_REAL,
    TAU_SEP,
    EngineError,
    HomogeneousForm,
    ProjectivePoint,
    exponent_index,
)
from .binary import complex_rank_binary, real_rank_binary, sylvester_decompose
from .decompose import (
    DecompositionFailure,
    DecompositionProblem,
    Label,
    NLSConfig,
    conjugate_only_decompose,
    conjugate_only_flags,
    decompose_weight,
    decompose_with_template,
    generic_rank,
    generic_rank_flags,
)
from .hypersurface import HypersurfaceInstance, RetriesExhausted, find_label_hypersurface
from .labels import LabeledSet, SpanCertificate
from .survey import (
    BinaryGeometry,
    EnsembleSpec,
    HypersurfaceGeometry,
    VeroneseGeometry,
    survey_labels,
)

SEED_ENV_VAR = "WARING_LABELS_SEED"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RETRIES = 2
EXIT_FAILURE = 3


class SchemaViolation(Exception):
    """Input document rejected; carries the offending JSON path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(message)


@dataclass(frozen=True)
class GlobalConfig:
    """Tolerances and solver defaults, echoed verbatim into every output."""

    tau_real: float = TAU_REAL
    tau_pair: float = TAU_PAIR
    tau_sep: float = TAU_SEP
    rank_tol: float = RANK_TOL
    membership_tol: float = MEMBERSHIP_TOL
    residual_tol: float = 1e-6
    seed: int = 0
    max_retries: int = 20
    nls_max_iters: int = 1500
    nls_lambda_init: float = 1e-3
    nls_gradient_tol: float = 1e-12
    nls_restarts: int = 8

    def __post_init__(self):
        for name in ("tau_real", "tau_pair", "tau_sep", "rank_tol",
                     "membership_tol", "residual_tol", "nls_lambda_init",
                     "nls_gradient_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.seed < 0 or self.max_retries < 1 or self.nls_max_iters < 1 or self.nls_restarts < 1:
            raise ValueError("invalid configuration")

    def nls(self, seed: int | None = None) -> NLSConfig:
        return NLSConfig(
            max_iters=self.nls_max_iters,
            lambda_init=self.nls_lambda_init,
            gradient_tol=self.nls_gradient_tol,
            residual_tol=self.residual_tol,
            restarts=self.nls_restarts,
            seed=self.seed if seed is None else seed,
        )


def canonical_json(obj) -> str:
    """Deterministic serialization: sorted keys, shortest round-trip floats."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _schema(name: str) -> dict:
    text = resources.files("waring_labels").joinpath(f"schemas/{name}").read_text()
    return json.loads(text)


def _registry() -> Registry:
    reg = Registry()
    for name in ("form.schema.json", "point.schema.json", "survey-spec.schema.json",
                 "output.schema.json"):
        schema = _schema(name)
        reg = reg.with_resource(schema["$id"], Resource.from_contents(schema))
    return reg


def _json_path(error: jsonschema.ValidationError) -> str:
    parts = []
    for item in error.absolute_path:
        if isinstance(item, int):
            if parts:
                parts[-1] += f"[{item}]"
            else:
                parts.append(f"[{item}]")
        else:
            parts.append(str(item))
    return ".".join(parts) if parts else "(document root)"


def validate_document(doc, schema_name: str) -> None:
    validator = jsonschema.Draft202012Validator(
        _schema(schema_name), registry=_registry()
    )
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise SchemaViolation(_json_path(e), e.message)


def parse_form(doc) -> HomogeneousForm:
    """Validated form from a JSON object (monomial or scaled basis)."""
    validate_document(doc, "form.schema.json")
    n, d = doc["n"], doc["d"]
    basis = doc.get("basis", "monomial")
    if basis == "scaled" and n != 1:
        raise SchemaViolation("basis", "the scaled basis is defined for binary forms only")
    idx = exponent_index(n, d)
    coeffs = np.zeros(len(idx), dtype=np.complex128)
    seen = set()
    for i, entry in enumerate(doc["coeffs"]):
        alpha = tuple(entry["alpha"])
        path = f"coeffs[{i}].alpha"
        if len(alpha) != n + 1:
            raise SchemaViolation(path, f"expected {n + 1} entries, got {len(alpha)}")
        if sum(alpha) != d:
            raise SchemaViolation(path, f"exponent vector must sum to d={d}")
        if alpha in seen:
            raise SchemaViolation(path, "duplicate exponent vector")
        seen.add(alpha)
        value = complex(entry["re"], entry.get("im", 0.0))
        if basis == "scaled":
            value *= math.comb(d, alpha[1])
        coeffs[idx[alpha]] = value
    if not np.any(coeffs != 0):
        raise SchemaViolation("coeffs", "the zero form is not admitted")
    return HomogeneousForm(n, d, coeffs)


def parse_point(doc) -> ProjectivePoint:
    validate_document(doc, "point.schema.json")
    coords = []
    for entry in doc["coords"]:
        if isinstance(entry, list):
            coords.append(complex(entry[0], entry[1]))
        else:
            coords.append(complex(entry, 0.0))
    try:
        return ProjectivePoint(np.array(coords))
    except ValueError as exc:
        raise SchemaViolation("coords", str(exc)) from exc


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise SchemaViolation("(file)", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaViolation("(file)", f"{path} is not valid JSON: {exc}") from exc


def load_config(path: str | None) -> GlobalConfig:
    if path is None:
        return GlobalConfig()
    doc = _load_json(path)
    known = set(GlobalConfig.__dataclass_fields__)
    for key in doc:
        if key not in known:
            raise SchemaViolation(key, "unknown configuration key")
    try:
        return GlobalConfig(**doc)
    except (TypeError, ValueError) as exc:
        raise SchemaViolation("(config)", str(exc)) from exc


def _effective_seed(args, config: GlobalConfig) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise SchemaViolation(SEED_ENV_VAR, "seed must be an integer") from exc
    return config.seed


def serialize_point(p: ProjectivePoint) -> list:
    return [[float(z.real), float(z.imag)] for z in p.coords]


def labeled_result(S: LabeledSet, cert: SpanCertificate, **extra) -> dict:
    lab = S.label
    result = {
        "label": [lab.a, lab.b],
        "weight": lab.weight,
        "real_points": [serialize_point(p) for p in S.real_points],
        "pairs": [serialize_point(p) for p in S.pairs],
        "real_coeffs": [float(x) for x in cert.real_coeffs],
        "pair_coeffs": [[float(z.real), float(z.imag)] for z in cert.pair_coeffs],
        "residual": float(cert.residual),
        "degenerate": bool(cert.degenerate),
    }
    result.update(extra)
    return result


def _emit(command: str, config: GlobalConfig, result: dict) -> None:
    doc = {
        "artifact": "waring-labels",
        "version": __version__,
        "command": command,
        "config": asdict(config),
        "result": result,
    }
    sys.stdout.write(canonical_json(doc) + "\n")


def _cmd_decompose_binary(args) -> int:
    config = load_config(args.config)
    config = replace(config, seed=_effective_seed(args, config))
    f = parse_form(_load_json(args.form))
    if f.n != 1:
        raise SchemaViolation("n", "decompose-binary expects a binary form (n = 1)")
    rank, _ = complex_rank_binary(f, config.rank_tol, config.tau_sep)
    S, cert = sylvester_decompose(
        f, config.rank_tol, config.tau_real, config.tau_pair, config.tau_sep,
        config.membership_tol,
    )
    command = f"decompose-binary --form {args.form} --seed {config.seed}"
    _emit(command, config, labeled_result(S, cert, complex_rank=rank))
    return EXIT_OK


def _cmd_rank(args) -> int:
    config = load_config(args.config)
    config = replace(config, seed=_effective_seed(args, config))
    f = parse_form(_load_json(args.form))
    if f.n != 1:
        raise SchemaViolation("n", "rank expects a binary form (n = 1)")
    crank, _ = complex_rank_binary(f, config.rank_tol, config.tau_sep)
    rr = real_rank_binary(f, budget=args.budget, rank_tol=config.rank_tol,
                          tau_real=config.tau_real, tau_sep=config.tau_sep)
    result = {
        "complex_rank": crank,
        "real_rank": rr.value,
        "real_rank_lower_bound": rr.lower_bound,
    }
    command = f"rank --form {args.form} --budget {args.budget} --seed {config.seed}"
    _emit(command, config, result)
    return EXIT_OK


def _cmd_label_hypersurface(args) -> int:
    config = load_config(args.config)
    config = replace(config, seed=_effective_seed(args, config),
                     max_retries=args.max_retries)
    F = parse_form(_load_json(args.surface))
    q = parse_point(_load_json(args.point))
    try:
        inst = HypersurfaceInstance(F, q)
    except ValueError as exc:
        raise SchemaViolation("(instance)", str(exc)) from exc
    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    S, cert = find_label_hypersurface(
        inst, rng, max_retries=config.max_retries, prefer_pair=args.prefer_pair,
        tol=config.membership_tol, tau_real=config.tau_real,
        tau_pair=config.tau_pair, tau_sep=config.tau_sep,
    )
    command = (
        f"label-hypersurface --surface {args.surface} --point {args.point}"
        f" --seed {config.seed} --max-retries {config.max_retries}"
        + (" --prefer-pair" if args.prefer_pair else "")
    )
    _emit(command, config, labeled_result(S, cert))
    return EXIT_OK


def _cmd_decompose_veronese(args) -> int:
    config = load_config(args.config)
    config = replace(config, seed=_effective_seed(args, config))
    f = parse_form(_load_json(args.form))
    if not f.is_real:
        raise SchemaViolation("coeffs", "decompose-veronese expects a real form")
    nls = config.nls()
    flags = list(generic_rank_flags(f.n, f.d))
    extra = {"generic_rank": generic_rank(f.n, f.d), "flags": flags}
    if args.weight < 1:
        raise SchemaViolation("weight", "weight must be >= 1")
    if args.conjugate_only:
        if args.weight % 2 != 0 or args.weight < 2:
            raise SchemaViolation("weight", "--conjugate-only needs an even weight >= 2")
        k = args.weight - 2
        extra["flags"] = sorted(set(flags) | set(conjugate_only_flags(k)))
        S, cert = conjugate_only_decompose(f, k, config=nls,
                                           tau_real=config.tau_real,
                                           tau_pair=config.tau_pair)
    elif args.template is not None:
        a, b = args.template
        try:
            template = Label(a, b)
        except ValueError as exc:
            raise SchemaViolation("template", str(exc)) from exc
        if template.weight != args.weight:
            raise SchemaViolation("template", f"template weight {template.weight} != --weight {args.weight}")
        S, cert = decompose_with_template(
            DecompositionProblem(f, template, nls),
            tau_real=config.tau_real, tau_pair=config.tau_pair,
        )
    else:
        S, cert = decompose_weight(f, args.weight, skip_all_real=args.skip_all_real,
                                   config=nls, tau_real=config.tau_real,
                                   tau_pair=config.tau_pair)
    command = f"decompose-veronese --form {args.form} --weight {args.weight}"
    if args.template is not None:
        command += f" --template {args.template[0]},{args.template[1]}"
    if args.skip_all_real:
        command += " --skip-all-real"
    if args.conjugate_only:
        command += " --conjugate-only"
    command += f" --seed {config.seed}"
    _emit(command, config, labeled_result(S, cert, **extra))
    return EXIT_OK


def _parse_survey_spec(doc, config: GlobalConfig, seed: int) -> EnsembleSpec:
    validate_document(doc, "survey-spec.schema.json")
    g = doc["geometry"]
    if g["kind"] == "binary":
        geometry = BinaryGeometry(g["d"])
    elif g["kind"] == "veronese":
        geometry = VeroneseGeometry(g["n"], g["d"], g.get("weight"))
    else:
        geometry = HypersurfaceGeometry(parse_form(g["surface"]))
    return EnsembleSpec(
        geometry=geometry,
        trials=doc["trials"],
        seed=doc.get("seed", seed),
        distribution=doc.get("distribution", "gaussian-monomial"),
        nls=config.nls(),
    )


def _cmd_survey(args) -> int:
    config = load_config(args.config)
    config = replace(config, seed=_effective_seed(args, config))
    spec = _parse_survey_spec(_load_json(args.spec), config, config.seed)
    hist = survey_labels(spec, threads=args.threads)
    if args.csv:
        hist.write_csv(args.csv)
    command = f"survey --spec {args.spec}"
    _emit(command, config, hist.to_json_obj())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="waring-labels",
        description="Conjugation-invariant additive decompositions with label certificates",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--config", help="path to a JSON configuration file")
        p.add_argument("--seed", type=int, help="RNG seed (overrides config and environment)")

    p = sub.add_parser("decompose-binary", help="Sylvester decomposition of a real binary form")
    p.add_argument("--form", required=True)
    common(p)
    p.set_defaults(func=_cmd_decompose_binary)

    p = sub.add_parser("rank", help="complex and real rank of a real binary form")
    p.add_argument("--form", required=True)
    p.add_argument("--budget", type=int, default=256)
    common(p)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("label-hypersurface", help="weight-2 label of a point against a hypersurface")
    p.add_argument("--surface", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--max-retries", type=int, default=20)
    p.add_argument("--prefer-pair", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_label_hypersurface)

    def template_arg(text):
        try:
            a, b = text.split(",")
            return (int(a), int(b))
        except ValueError as exc:
            raise argparse.ArgumentTypeError("expected a,b") from exc

    p = sub.add_parser("decompose-veronese", help="labeled Waring decomposition at a given weight")
    p.add_argument("--form", required=True)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--template", type=template_arg)
    p.add_argument("--skip-all-real", action="store_true")
    p.add_argument("--conjugate-only", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_decompose_veronese)

    p = sub.add_parser("survey", help="Monte Carlo label-class survey")
    p.add_argument("--spec", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--csv", help="also write the histogram as CSV to this path")
    common(p)
    p.set_defaults(func=_cmd_survey)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; the contract says 1
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except SchemaViolation as exc:
        sys.stderr.write(canonical_json({"error": {"path": exc.path, "message": str(exc)}}) + "\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(canonical_json({"error": {"path": "(input)", "message": str(exc)}}) + "\n")
        return EXIT_USAGE
    except RetriesExhausted as exc:
        sys.stderr.write(canonical_json({"error": {"kind": "retries-exhausted", "message": str(exc)}}) + "\n")
        return EXIT_RETRIES
    except DecompositionFailure as exc:
        best = exc.best_residual if math.isfinite(exc.best_residual) else None
        sys.stderr.write(
            canonical_json({"error": {"kind": "decomposition-failure", "message": str(exc),
                                      "best_residual": best}}) + "\n"
        )
        return EXIT_FAILURE
    except EngineError as exc:
        sys.stderr.write(canonical_json({"error": {"kind": type(exc).__name__, "message": str(exc)}}) + "\n")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
