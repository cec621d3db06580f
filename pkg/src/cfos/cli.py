# src/cfos/cli.py

"""cfos Command Line Interface"""

import sys
import functools
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import click
from pydantic import BaseModel, ValidationError

from .core.config import BaselineSpec, EvaluationSpec, GenerationParams, RunConfig, SynthSpec
from .core.environment import get_env, get_env_bool, get_env_int, load_env
from .core.logger import get_logger, init_logger
from .core.reports import TOOL_VERSION, dumps, to_jsonable, write_json
from .data.dataset import ClassPair, Dataset, compute_feature_stats, load_csv, write_csv
from .data.synthetic import make_synthetic
from .evaluation.census import census_report
from .evaluation.crossval import folds_frame, kfold_evaluate
from .evaluation.report import TABLE_FORMATS, merge_reports, render_table
from .models import CLASSIFIER_TYPES, make_classifier
from .models.ridge import LinearModel
from .oversampling import build_registry
from .oversampling.baselines import baseline_oversample_dataset
from .oversampling.counterfactual import oversample_dataset

DEFAULT_SEED = 42
DEFAULT_THREADS = 1

# ==================== Helpers ====================
def print_version(ctx, param, value):
    if not value or ctx.resilient_parsing:
        return
    click.echo(TOOL_VERSION)
    ctx.exit()

def handle_errors(command: Callable) -> Callable:
    """Map validation failures to usage errors (exit 2) and data errors to exit 1"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except click.ClickException:
            raise
        except ValidationError as e:
            raise click.UsageError(_validation_message(e))
        except (ValueError, OSError) as e:
            get_logger().debug(f"{command.__name__} failed: {e!r}")
            raise click.ClickException(str(e))
    return wrapper

def _validation_message(error: ValidationError) -> str:
    problems = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "parameters"
        problems.append(f"{location}: {item['msg']}")
    return "invalid parameters: " + "; ".join(problems)

def _seed(seed: Optional[int]) -> int:
    return seed if seed is not None else get_env_int("CFOS_SEED", DEFAULT_SEED)

def _threads(threads: Optional[int]) -> int:
    return threads if threads is not None else get_env_int("CFOS_THREADS", DEFAULT_THREADS)

def _check_not_input(output: Optional[str], inputs: Sequence[str]) -> None:
    if output is None:
        return
    target = Path(output).resolve()
    for path in inputs:
        if Path(path).resolve() == target:
            raise click.UsageError(f"output {output} would overwrite input {path}")

def _load(path: str, label_column: str, drop_columns: Sequence[str]) -> Dataset:
    return load_csv(path, label_column, drop_columns)

def _resolve_pair(d: Dataset, pair: Optional[Tuple[str, str]], all_pairs: bool) -> Optional[List[ClassPair]]:
    """Explicit --pair given as label names or class ids"""
    if not pair:
        return None
    if all_pairs:
        raise click.UsageError("--pair and --all-pairs are mutually exclusive")
    by_name = {name: cls for cls, name in d.label_names.items()}
    ids = []
    for value in pair:
        if value in by_name:
            ids.append(by_name[value])
        elif value.isdigit() and int(value) in d.label_names:
            ids.append(int(value))
        else:
            raise click.UsageError(f"--pair: {value!r} is neither a label nor a class id of the input")
    if ids[0] == ids[1]:
        raise click.UsageError("--pair needs two different classes")
    return [(ids[0], ids[1])]

def _envelope(kind: str, config: RunConfig, **sections: Any) -> Dict[str, Any]:
    """Report skeleton shared by every subcommand"""
    def convert(value: Any) -> Any:
        if isinstance(value, BaseModel):
            return to_jsonable(value)
        if isinstance(value, list):
            return [convert(v) for v in value]
        return value
    body = {"tool_version": TOOL_VERSION, "kind": kind, "config": to_jsonable(config)}
    body.update({name: convert(value) for name, value in sections.items()})
    return body

def _emit(report: Dict[str, Any], path: Optional[str]) -> None:
    if path:
        write_json(report, path)
        get_logger().info(f"Report written to {path}")
    else:
        click.echo(dumps(report), nl=False)

def _default_report_path(out: str) -> str:
    return str(Path(out).with_suffix(".json"))

def _write_models(models: Sequence[LinearModel], path: str) -> List[str]:
    """One model file; several pairs get one file each, suffixed with the pair ids"""
    if len(models) == 1:
        models[0].save(path)
        return [path]
    target = Path(path)
    written = []
    for model in models:
        i, j = model.pair
        model_path = target.with_name(f"{target.stem}.{i}-{j}{target.suffix}")
        model.save(model_path)
        written.append(str(model_path))
    return written

# ==================== Shared options ====================
def input_options(command: Callable) -> Callable:
    command = click.option('--drop-column', 'drop_columns', multiple=True,
                           help='Column to ignore (repeatable), e.g. an identifier.')(command)
    command = click.option('--label-column', default='label', show_default=True,
                           help='Name of the class label column.')(command)
    command = click.option('--in', 'input_path', required=True, type=click.Path(exists=True, dir_okay=False),
                           help='Input CSV.')(command)
    return command

def run_options(command: Callable) -> Callable:
    command = click.option('--threads', type=int, default=None,
                           help='Worker threads (default: $CFOS_THREADS or 1).')(command)
    command = click.option('--seed', type=int, default=None,
                           help='Random seed (default: $CFOS_SEED or 42).')(command)
    return command

def generation_options(command: Callable) -> Callable:
    options = [
        click.option('--epsilon', type=float, default=None,
                     help='Distance budget (default: 25th percentile of pairwise class distances).'),
        click.option('--trials', type=int, default=50, show_default=True, help='Trials per round.'),
        click.option('--target-ratio', type=float, default=1.0, show_default=True,
                     help='Desired minority/majority ratio after augmentation.'),
        click.option('--lambda', 'lambda_', type=float, default=1.0, show_default=True,
                     help='Prediction-loss weight of the weighted objective.'),
        click.option('--tau', type=float, default=0.15, show_default=True,
                     help='Boundary band half-width recorded with the run.'),
        click.option('--ridge-rho', type=float, default=1e-3, show_default=True,
                     help='Ridge regularization of the generation model.'),
        click.option('--sampler', type=click.Choice(['inverse', 'gibbs']), default='inverse',
                     show_default=True, help='Truncated normal sampler.'),
        click.option('--gibbs-sweeps', type=int, default=25, show_default=True,
                     help='Sweeps of the Gibbs sampler.'),
        click.option('--objective', type=click.Choice(['distance', 'weighted']), default='distance',
                     show_default=True, help='Selection rule among accepted candidates.'),
        click.option('--exhaustive', is_flag=True,
                     help='Attempt every majority row instead of stopping at the target ratio.'),
        click.option('--all-pairs', is_flag=True,
                     help='Oversample every smaller class against every larger class.'),
    ]
    for option in reversed(options):
        command = option(command)
    return command

def _generation_params(seed: int, threads: int, **flags: Any) -> GenerationParams:
    return GenerationParams(
        lambda_=flags["lambda_"],
        epsilon=flags["epsilon"],
        trials=flags["trials"],
        seed=seed,
        target_ratio=flags["target_ratio"],
        boundary_tau=flags["tau"],
        ridge_rho=flags["ridge_rho"],
        exhaustive=flags["exhaustive"],
        all_pairs=flags["all_pairs"],
        sampler=flags["sampler"],
        gibbs_sweeps=flags["gibbs_sweeps"],
        objective=flags["objective"],
        threads=threads,
    )

# ==================== CLI ====================
@click.group()
@click.option('--version', is_flag=True, callback=print_version,
              expose_value=False, is_eager=True, help='Show version information.')
@click.option('--debug', is_flag=True, help='Enable debug logging (or set $CFOS_DEBUG).')
@click.option('--log-dir', type=click.Path(file_okay=False), default=None,
              help='Also write a daily debug log here.')
@click.option('--env', 'env_file', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Path to .env file.')
def cli(debug, log_dir, env_file):
    """cfos - counterfactual oversampling for imbalanced tabular data

    Generate, oversample, evaluate and compare imbalanced datasets.
    """
    load_env(env_file)
    init_logger(
        log_dir=log_dir or get_env("CFOS_LOG_DIR"),
        development=debug or get_env_bool("CFOS_DEBUG"),
    )

@cli.command()
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Output CSV.')
@click.option('--n-total', type=int, default=1000, show_default=True)
@click.option('--n-minority', type=int, default=83, show_default=True)
@click.option('--n-noise', type=int, default=4, show_default=True,
              help='Minority points planted inside the majority cluster.')
@click.option('--majority-center', type=float, nargs=2, default=(0.0, 0.0), show_default=True)
@click.option('--minority-center', type=float, nargs=2, default=(4.0, 4.0), show_default=True)
@click.option('--spread', type=float, default=1.0, show_default=True)
@click.option('--seed', type=int, default=None, help='Random seed (default: $CFOS_SEED or 42).')
@click.option('--report', 'report_path', type=click.Path(dir_okay=False), default=None,
              help='Optional JSON report.')
@handle_errors
def synth(out, n_total, n_minority, n_noise, majority_center, minority_center, spread, seed, report_path):
    """Write a two-cluster synthetic dataset with minority noise points."""
    spec = SynthSpec(
        n_total=n_total,
        n_minority=n_minority,
        n_noise=n_noise,
        majority_center=tuple(majority_center),
        minority_center=tuple(minority_center),
        spread=spread,
        seed=_seed(seed),
    )
    config = RunConfig(subcommand="synth", outputs=[out], seed=spec.seed, synth=spec.model_dump(mode="json"))
    d = make_synthetic(spec)
    write_csv(d, out)
    get_logger().info(f"Wrote {d.n_samples} rows to {out}, class sizes {d.class_sizes}")
    if report_path:
        _emit(_envelope("synth", config, class_sizes={d.label_names[c]: n for c, n in d.class_sizes.items()}),
              report_path)

@cli.command()
@input_options
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='JSON output (default: stdout).')
@handle_errors
def stats(input_path, label_column, drop_columns, out):
    """Feature statistics and ingestion summary of a CSV."""
    config = RunConfig(subcommand="stats", inputs=[input_path], outputs=[out] if out else [],
                       label_column=label_column, drop_columns=list(drop_columns))
    d = _load(input_path, label_column, drop_columns)
    feature_stats = compute_feature_stats(d)
    _emit(_envelope(
        "stats", config,
        ingestion=d.ingestion,
        imbalance_ratio=d.imbalance_ratio(),
        feature_stats=feature_stats.to_dict(),
    ), out)

@cli.command()
@input_options
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Augmented CSV.')
@click.option('--report', 'report_path', type=click.Path(dir_okay=False), default=None,
              help='JSON report (default: next to --out).')
@click.option('--pair', nargs=2, type=str, default=None,
              help='Minority and majority class (labels or ids) instead of automatic pairs.')
@generation_options
@run_options
@click.option('--record-timing', is_flag=True, help='Include wall time in the report.')
@click.option('--log-candidates', is_flag=True,
              help='Log the accepted candidates of each generated row at debug level (needs --debug).')
@click.option('--model-out', type=click.Path(dir_okay=False), default=None,
              help='Write the frozen generation model(s) as JSON.')
@handle_errors
def oversample(input_path, label_column, drop_columns, out, report_path, pair, seed, threads,
               record_timing, log_candidates, model_out, **flags):
    """Augment minority classes with counterfactuals of majority rows."""
    params = _generation_params(_seed(seed), _threads(threads), **flags)
    params = params.model_copy(update={"log_candidates": log_candidates})
    _check_not_input(out, [input_path])
    report_path = report_path or _default_report_path(out)
    _check_not_input(report_path, [input_path])

    d = _load(input_path, label_column, drop_columns)
    pairs = _resolve_pair(d, pair, params.all_pairs)
    config = RunConfig(
        subcommand="oversample", inputs=[input_path], outputs=[out, report_path],
        label_column=label_column, drop_columns=list(drop_columns),
        pair=pairs[0] if pairs else None, seed=params.seed, threads=params.threads,
        generation=params.model_dump(mode="json", by_alias=True),
    )
    augmented, reports, models = oversample_dataset(d, params, pairs, record_timing)
    write_csv(augmented, out, include_provenance=True)
    written = _write_models(models, model_out) if model_out and models else []
    _emit(_envelope("oversample", config, ingestion=d.ingestion, pairs=reports, model_files=written), report_path)

@cli.command()
@input_options
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Augmented CSV.')
@click.option('--report', 'report_path', type=click.Path(dir_okay=False), default=None,
              help='JSON report (default: next to --out).')
@click.option('--method', type=click.Choice(['random', 'random_dup', 'smote', 'adasyn']), default='smote',
              show_default=True)
@click.option('--k-neighbors', type=int, default=5, show_default=True)
@click.option('--target-ratio', type=float, default=1.0, show_default=True)
@click.option('--pair', nargs=2, type=str, default=None,
              help='Minority and majority class (labels or ids) instead of automatic pairs.')
@click.option('--all-pairs', is_flag=True)
@click.option('--seed', type=int, default=None, help='Random seed (default: $CFOS_SEED or 42).')
@handle_errors
def baseline(input_path, label_column, drop_columns, out, report_path, method, k_neighbors,
             target_ratio, pair, all_pairs, seed):
    """Augment minority classes with a reference oversampler."""
    spec = BaselineSpec(
        method="random_dup" if method == "random" else method,
        k_neighbors=k_neighbors,
        seed=_seed(seed),
        target_ratio=target_ratio,
        all_pairs=all_pairs,
    )
    _check_not_input(out, [input_path])
    report_path = report_path or _default_report_path(out)
    _check_not_input(report_path, [input_path])

    d = _load(input_path, label_column, drop_columns)
    pairs = _resolve_pair(d, pair, spec.all_pairs)
    config = RunConfig(
        subcommand="baseline", inputs=[input_path], outputs=[out, report_path],
        label_column=label_column, drop_columns=list(drop_columns),
        pair=pairs[0] if pairs else None, seed=spec.seed,
        baseline=spec.model_dump(mode="json"),
    )
    augmented, reports = baseline_oversample_dataset(d, spec, pairs)
    write_csv(augmented, out, include_provenance=True)
    _emit(_envelope("baseline", config, ingestion=d.ingestion, pairs=reports), report_path)

@cli.command()
@input_options
@click.option('--method', default='counterfactual', show_default=True,
              help='Oversampler: counterfactual (cf, ours), random, smote, adasyn or none.')
@click.option('--classifier', type=click.Choice(sorted(CLASSIFIER_TYPES)), default='knn', show_default=True)
@click.option('--folds', type=int, default=10, show_default=True)
@click.option('--runs', type=int, default=1, show_default=True)
@click.option('--knn-k', type=int, default=5, show_default=True)
@click.option('--k-neighbors', type=int, default=5, show_default=True, help='Neighbours of SMOTE/ADASYN.')
@generation_options
@run_options
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='JSON output (default: stdout).')
@click.option('--folds-csv', type=click.Path(dir_okay=False), default=None,
              help='Also write one CSV row per (run, fold).')
@click.option('--record-timing', is_flag=True, help='Include wall time in the report.')
@handle_errors
def evaluate(input_path, label_column, drop_columns, method, classifier, folds, runs, knn_k, k_neighbors,
             seed, threads, out, folds_csv, record_timing, **flags):
    """Stratified k-fold evaluation of an oversampler and a classifier."""
    seed, threads = _seed(seed), _threads(threads)
    spec = EvaluationSpec(
        folds=folds, runs=runs, seed=seed, classifier=classifier,
        knn_k=knn_k, ridge_rho=flags["ridge_rho"], threads=threads,
    )
    params = _generation_params(seed, 1, **flags)
    baseline_spec = BaselineSpec(k_neighbors=k_neighbors, seed=seed,
                                 target_ratio=flags["target_ratio"], all_pairs=flags["all_pairs"])
    registry = build_registry(params, baseline_spec)
    handle = registry.get(method)
    if handle is None:
        raise click.BadParameter(f"unknown method {method!r}, expected one of {registry.names()}",
                                 param_hint="'--method'")
    _check_not_input(out, [input_path])
    _check_not_input(folds_csv, [input_path])

    d = _load(input_path, label_column, drop_columns)
    config = RunConfig(
        subcommand="evaluate", inputs=[input_path], outputs=[p for p in (out, folds_csv) if p],
        label_column=label_column, drop_columns=list(drop_columns), seed=seed, threads=threads,
        evaluation=spec.model_dump(mode="json"), method=handle.name,
        generation=params.model_dump(mode="json", by_alias=True),
        baseline=baseline_spec.model_dump(mode="json"),
    )
    clf = make_classifier(spec.classifier, spec.knn_k, spec.ridge_rho)
    report = kfold_evaluate(d, handle, clf, spec.folds, spec.runs, spec.seed, spec.threads, record_timing)
    if folds_csv:
        folds_frame(report).to_csv(folds_csv, index=False, lineterminator="\n")
    _emit(_envelope("evaluate", config, report=report), out)

@cli.command()
@click.option('--factual', required=True, type=click.Path(exists=True, dir_okay=False), help='Factual CSV.')
@click.option('--augmented', required=True, type=click.Path(exists=True, dir_okay=False),
              help='Augmented CSV with a provenance column.')
@click.option('--model', 'model_path', required=True, type=click.Path(exists=True, dir_okay=False),
              help='Generation model JSON (from oversample --model-out).')
@click.option('--label-column', default='label', show_default=True)
@click.option('--drop-column', 'drop_columns', multiple=True)
@click.option('--tau', type=float, default=0.15, show_default=True, help='Boundary band half-width.')
@click.option('--method', 'method_name', default=None, help='Row label in reports (default: from provenance).')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='JSON output (default: stdout).')
@handle_errors
def census(factual, augmented, model_path, label_column, drop_columns, tau, method_name, out):
    """Count generated rows per region of the generation model."""
    if not tau > 0:
        raise click.BadParameter(f"must be positive, got {tau}", param_hint="'--tau'")
    _check_not_input(out, [factual, augmented, model_path])
    config = RunConfig(subcommand="census", inputs=[factual, augmented, model_path],
                       outputs=[out] if out else [], label_column=label_column,
                       drop_columns=list(drop_columns), tau=tau)
    model = LinearModel.load(model_path)
    factual_d = _load(factual, label_column, drop_columns)
    augmented_d = _load(augmented, label_column, drop_columns)
    report = census_report(factual_d, augmented_d, model, tau, method_name)
    get_logger().info(f"{report.method}: {report.counts.model_dump()} of {report.generated} generated rows")
    _emit(_envelope("census", config, report=report), out)

@cli.command()
@click.argument('reports', nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--format', 'fmt', type=click.Choice(TABLE_FORMATS), default=None,
              help='Table format (default: from --out suffix, else markdown).')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Output file (default: stdout).')
@handle_errors
def report(reports, fmt, out):
    """Merge JSON reports into one comparison table."""
    _check_not_input(out, reports)
    if fmt is None:
        fmt = "csv" if out and out.endswith(".csv") else "markdown"
    text = render_table(merge_reports(reports), fmt)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        get_logger().info(f"Table written to {out}")
    else:
        click.echo(text, nl=False)

# ==================== Entry points ====================
def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code: 0 ok, 1 data error, 2 usage error"""
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="cfos",
                          standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return result if isinstance(result, int) else 0

def main() -> None:
    sys.exit(run())

if __name__ == '__main__':
    main()
