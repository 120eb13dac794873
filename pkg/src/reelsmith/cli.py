"""Command-line entry points: serve, run, export, eval, demo."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .errors import ReelsmithError
from .highlight import Backend, HighlightConfig
from .model import Article, Framing
from .providers import Cassette, HttpTransport, Mode, ProviderConfig, ProviderSession
from .workspace import DeterministicClock, ProjectStore, export_bundle, run_pipeline


def load_article_file(path: Path) -> Article:
    """First line is the headline; everything after the first blank line is
    the body."""
    text = Path(path).read_text(encoding="utf-8")
    headline, _, body = text.partition("\n\n")
    return Article(headline=headline.strip(), body=body.strip())


def build_session(mode: str, cassette_path: str | None) -> ProviderSession:
    mode_value = Mode(mode)
    cassette = None
    if cassette_path:
        path = Path(cassette_path)
        cassette = Cassette.load(path) if path.exists() else Cassette(path)
    transport = None
    if mode_value in (Mode.LIVE, Mode.RECORD):
        transport = HttpTransport(ProviderConfig.from_env())
    return ProviderSession(mode=mode_value, transport=transport, cassette=cassette)


@click.group()
def main() -> None:
    """Turn news articles into reel scripts and storyboards."""


@main.command()
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--storage-dir", required=True, type=click.Path(file_okay=False))
@click.option(
    "--mode",
    default=Mode.LIVE.value,
    show_default=True,
    type=click.Choice([m.value for m in Mode]),
)
@click.option("--cassette", default=None, type=click.Path(dir_okay=False))
@click.option(
    "--frontend-dir",
    default=None,
    type=click.Path(file_okay=False),
    help="Directory of built static UI assets to serve at /.",
)
def serve(port, host, storage_dir, mode, cassette, frontend_dir):
    """Run the HTTP API (optionally serving the built UI)."""
    import uvicorn

    from .api import create_app

    store = ProjectStore(Path(storage_dir))
    session = build_session(mode, cassette)
    app = create_app(store, lambda: session)
    if frontend_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.option("--article", "article_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--framing",
    required=True,
    type=click.Choice([f.value for f in Framing]),
)
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option(
    "--mode",
    default=Mode.REPLAY.value,
    show_default=True,
    type=click.Choice([m.value for m in Mode]),
)
@click.option("--cassette", default=None, type=click.Path(dir_okay=False))
@click.option("--threshold", default=0.5, show_default=True, type=float)
def run(article_path, framing, out_dir, mode, cassette, threshold):
    """Batch pipeline: article file to a complete export bundle."""
    article = load_article_file(Path(article_path))
    session = build_session(mode, cassette)
    out = Path(out_dir)
    clock = DeterministicClock() if Mode(mode) is Mode.REPLAY else None
    store = ProjectStore(out / "storage", clock=clock)
    try:
        project = run_pipeline(
            store,
            article,
            Framing(framing),
            session,
            highlight_config=HighlightConfig(
                threshold=threshold, backend=Backend.LEXICAL_FALLBACK
            ),
        )
        manifest = export_bundle(project, out / "bundle", store)
    except ReelsmithError as exc:
        raise click.ClickException(f"[{exc.code}] {exc}")
    click.echo(json.dumps({"project_id": project.id, "manifest": manifest}, indent=2))


@main.command()
@click.option("--project", "project_id", required=True)
@click.option("--storage-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def export(project_id, storage_dir, out_dir):
    """Write the filming bundle for a stored project."""
    store = ProjectStore(Path(storage_dir))
    try:
        manifest = export_bundle(store.load(project_id), Path(out_dir), store)
    except ReelsmithError as exc:
        raise click.ClickException(f"[{exc.code}] {exc}")
    click.echo(json.dumps(manifest, indent=2))


@main.group(name="eval")
def eval_group() -> None:
    """Paired-rating statistics over a ratings CSV."""


def _paired_columns(path: Path) -> tuple[list[float], list[float]]:
    import csv

    a_values: list[float] = []
    b_values: list[float] = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if not reader.fieldnames or not {"a", "b"} <= set(reader.fieldnames):
            raise click.ClickException("input CSV needs columns: a, b")
        for row in reader:
            a_values.append(float(row["a"]))
            b_values.append(float(row["b"]))
    return a_values, b_values


@eval_group.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
def wilcoxon(input_path):
    """Paired signed-rank test; CSV columns a, b."""
    from .evalkit import wilcoxon_signed_rank

    a_values, b_values = _paired_columns(Path(input_path))
    try:
        result = wilcoxon_signed_rank(
            [{"a": a, "b": b} for a, b in zip(a_values, b_values)]
        )
    except ReelsmithError as exc:
        raise click.ClickException(f"[{exc.code}] {exc}")
    click.echo(json.dumps(result.to_dict(), indent=2))


@eval_group.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
def kappa(input_path):
    """Two-rater agreement; CSV columns a, b."""
    from .evalkit import cohens_kappa

    a_values, b_values = _paired_columns(Path(input_path))
    try:
        result = cohens_kappa(a_values, b_values)
    except ReelsmithError as exc:
        raise click.ClickException(f"[{exc.code}] {exc}")
    click.echo(json.dumps(result.to_dict(), indent=2))


@main.command()
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def demo(out_dir):
    """Emit the bundled demo article and record its replay cassette."""
    import tempfile

    from .demo import build_demo_cassette, write_demo_article

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_demo_article(out / "credit_card.txt")
    with tempfile.TemporaryDirectory() as scratch:
        build_demo_cassette(out / "cassette.json", Path(scratch))
    click.echo(f"wrote {out / 'credit_card.txt'} and {out / 'cassette.json'}")


if __name__ == "__main__":
    sys.exit(main())
