"""Command line front end: explain one instance, benchmark the grid, or serve.

Options can also come from FOILTREE_* environment variables. Exit codes:
0 on success, 2 on invalid usage or inputs, 1 on runtime failure. JSON output
modes keep stdout machine-readable; progress and logs go to stderr.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import dataset as ds
from . import models as mdl
from .errors import FoilTreeError
from .evaluation import DEFAULT_DATASETS, run_grid
from .explanation import (
    VERBOSITIES,
    ExplainerConfig,
    explain_with_tree,
    render_text,
    to_json,
)
from .report import format_text_table, to_json as report_json, write_report
from .sampling import SAMPLING_METHODS

_CONTEXT = {"auto_envvar_prefix": "FOILTREE", "help_option_names": ["-h", "--help"]}


def _explainer_options(f):
    f = click.option("--method", type=click.Choice(SAMPLING_METHODS), default="sampled-existing",
                     show_default=True, help="How local points are drawn.")(f)
    f = click.option("--m", "m", type=int, default=1000, show_default=True,
                     help="Number of local points.")(f)
    f = click.option("--kernel-width", type=float, default=None,
                     help="Proximity kernel width; defaults to 0.75 * sqrt(n_features).")(f)
    f = click.option("--max-depth", type=int, default=6, show_default=True)(f)
    f = click.option("--min-weight-fraction", type=float, default=0.01, show_default=True,
                     help="Smallest leaf weight as a fraction of total sample weight.")(f)
    f = click.option("--min-impurity-decrease", type=float, default=1e-7, show_default=True)(f)
    f = click.option("--strategy", type=click.Choice(("nearest", "accuracy-weighted")),
                     default="nearest", show_default=True, help="Contrast leaf search strategy.")(f)
    f = click.option("--lam", type=float, default=2.0, show_default=True,
                     help="Accuracy penalty weight for the accuracy-weighted strategy.")(f)
    return f


def _build_config(method, m, kernel_width, max_depth, min_weight_fraction,
                  min_impurity_decrease, strategy, lam) -> ExplainerConfig:
    try:
        return ExplainerConfig(
            method=method,
            m=m,
            kernel_width=kernel_width,
            max_depth=max_depth,
            min_weight_fraction=min_weight_fraction,
            min_impurity_decrease=min_impurity_decrease,
            strategy=strategy,
            lam=lam,
        )
    except ValueError as err:
        raise click.UsageError(str(err))


def _load_dataset(name: str, schema: str) -> ds.Dataset:
    try:
        if name in ds.BUILTIN_DATASETS:
            return ds.load_builtin(name)
        return ds.load_csv(name, schema=schema)
    except FoilTreeError as err:
        raise click.UsageError(f"cannot load dataset {name!r}: {err}")
    except OSError as err:
        raise click.UsageError(f"cannot read {name!r}: {err}")


@click.group(context_settings=_CONTEXT)
@click.version_option(package_name="foiltree")
def main() -> None:
    """Contrastive "why this class and not that one?" explanations for
    tabular classifiers, built from local one-vs-all decision trees."""


@main.command()
@click.option("--dataset", default="iris", show_default=True,
              help=f"Bundled dataset ({', '.join(ds.BUILTIN_DATASETS)}) or a csv path.")
@click.option("--schema", type=click.Choice(tuple(ds.BUILTIN_DATASETS) + ("generic",)),
              default="generic", show_default=True, help="Column layout for csv paths.")
@click.option("--model-kind", type=click.Choice(mdl.MODEL_KINDS), default="logistic-regression",
              show_default=True)
@click.option("--model-seed", type=int, default=0, show_default=True)
@click.option("--model-file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Load a previously saved model instead of training one.")
@click.option("--index", type=int, default=None,
              help="Index into the held-out test split of the chosen dataset.")
@click.option("--values", default=None,
              help="Comma-separated feature values for an ad-hoc instance.")
@click.option("--foil", default=None,
              help="Contrast class, by name or index; defaults to the model's second choice.")
@click.option("--split-seed", type=int, default=0, show_default=True)
@click.option("--test-fraction", type=float, default=0.3, show_default=True)
@click.option("--verbosity", type=click.Choice(VERBOSITIES), default="quantitative",
              show_default=True)
@click.option("--output", type=click.Choice(("text", "json")), default="text", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Sampling seed.")
@_explainer_options
def explain(dataset, schema, model_kind, model_seed, model_file, index, values, foil,
            split_seed, test_fraction, verbosity, output, seed, **explainer_kwargs):
    """Explain why the model chose its class over a contrast class."""
    config = _build_config(**explainer_kwargs)
    data = _load_dataset(dataset, schema)
    try:
        train, test = ds.split(data, test_fraction, seed=split_seed)
    except FoilTreeError as err:
        raise click.UsageError(str(err))

    if model_file is not None:
        try:
            model = mdl.load_model(model_file)
        except (FoilTreeError, OSError, ValueError) as err:
            raise click.ClickException(f"cannot load model: {err}")
    else:
        model = mdl.fit(model_kind, train, seed=model_seed)

    if (index is None) == (values is None):
        raise click.UsageError("provide exactly one of --index or --values")
    if index is not None:
        if not 0 <= index < test.n_instances:
            raise click.UsageError(
                f"index {index} out of range: test split has {test.n_instances} instances"
            )
        x_q = test.X[index]
    else:
        try:
            x_q = np.array([float(v) for v in values.split(",")], dtype=float)
        except ValueError:
            raise click.UsageError(f"cannot parse --values {values!r} as comma-separated numbers")
        if x_q.shape != (data.n_features,):
            raise click.UsageError(
                f"--values has {x_q.shape[0]} numbers but {data.name} has {data.n_features} features"
            )

    requested = None
    if foil is not None:
        if foil in data.class_names:
            requested = data.class_names.index(foil)
        else:
            try:
                requested = int(foil)
            except ValueError:
                raise click.UsageError(
                    f"unknown class {foil!r}; expected one of {data.class_names} or an index"
                )
            if not 0 <= requested < data.n_classes:
                raise click.UsageError(f"class index {requested} out of range")

    try:
        explanation, _tree = explain_with_tree(
            model, train, x_q, requested_foil=requested, config=config, seed=seed
        )
    except FoilTreeError as err:
        raise click.UsageError(str(err))

    if output == "json":
        click.echo(to_json(explanation, data.features))
    else:
        for line in render_text(explanation, data.class_names, data.features, verbosity):
            click.echo(line)


@main.command()
@click.option("--datasets", default=",".join(DEFAULT_DATASETS), show_default=True,
              help="Comma-separated bundled names or csv paths.")
@click.option("--models", "model_kinds", default=",".join(mdl.MODEL_KINDS), show_default=True,
              help="Comma-separated model kinds.")
@click.option("--master-seed", type=int, default=0, show_default=True)
@click.option("--repetitions", type=int, default=3, show_default=True)
@click.option("--test-fraction", type=float, default=0.3, show_default=True)
@click.option("--outdir", type=click.Path(file_okay=False), default=None,
              help="Directory for report.txt/csv/json and figures; omit to print only.")
@click.option("--figures/--no-figures", default=True, show_default=True)
@click.option("--output", type=click.Choice(("text", "json")), default="text", show_default=True)
@click.option("--quiet", is_flag=True, help="Suppress progress lines on stderr.")
@_explainer_options
def evaluate(datasets, model_kinds, master_seed, repetitions, test_fraction, outdir,
             figures, output, quiet, **explainer_kwargs):
    """Benchmark explanation quality over a dataset-by-model grid."""
    config = _build_config(**explainer_kwargs)
    names = [n.strip() for n in datasets.split(",") if n.strip()]
    kinds = [k.strip() for k in model_kinds.split(",") if k.strip()]
    for kind in kinds:
        if kind not in mdl.MODEL_KINDS:
            raise click.UsageError(f"unknown model kind {kind!r}; expected one of {mdl.MODEL_KINDS}")
    for name in names:
        if name not in ds.BUILTIN_DATASETS and not Path(name).exists():
            raise click.UsageError(f"unknown dataset {name!r} and no such file")
    if repetitions < 1:
        raise click.UsageError(f"repetitions must be >= 1, got {repetitions}")

    progress = None if quiet else (lambda line: click.echo(line, err=True))
    try:
        report = run_grid(
            datasets=names,
            model_kinds=kinds,
            config=config,
            master_seed=master_seed,
            repetitions=repetitions,
            test_fraction=test_fraction,
            progress=progress,
        )
    except FoilTreeError as err:
        raise click.ClickException(str(err))

    if outdir is not None:
        paths = write_report(report, outdir, figures=figures)
        if not quiet:
            for name, path in paths.items():
                click.echo(f"wrote {name}: {path}", err=True)
    if output == "json":
        click.echo(report_json(report))
    else:
        click.echo(format_text_table(report), nl=False)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--split-seed", type=int, default=0, show_default=True)
@click.option("--test-fraction", type=float, default=0.3, show_default=True)
@click.option("--cache-size", type=int, default=100, show_default=True,
              help="How many explanation trees to keep retrievable.")
@click.option("--ui-dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Serve a built single-page UI from this directory at /.")
def serve(host, port, split_seed, test_fraction, cache_size, ui_dir):
    """Run the HTTP explanation service."""
    import uvicorn

    from .service import create_app

    if cache_size < 1:
        raise click.UsageError(f"cache-size must be >= 1, got {cache_size}")
    app = create_app(
        split_seed=split_seed,
        test_fraction=test_fraction,
        cache_size=cache_size,
        ui_dir=ui_dir,
    )
    click.echo(f"serving on http://{host}:{port}", err=True)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
