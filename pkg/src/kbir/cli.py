"""Command line interface.

Exit codes: 0 success, 1 validation findings in the knowledge base or corpus,
2 usage errors and anything that failed to parse (XML, JSON, query text).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import NoReturn, Optional

import click

from .documents import DocumentRecord
from .errors import KbirError, SchemaViolationError
from .inference import rt_neighborhood
from .ingest import import_xtm, load_corpus, load_native, load_sidecar, save_native
from .model import KbInputs, resolve_label, validate_inputs
from .service import DEFAULT_BUDGET_SECONDS, QueryRequest, ServiceState, create_app, handle_query

_KB_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


def _fail(exc: KbirError, code: int) -> NoReturn:
    location = ""
    if exc.line is not None:
        location = f" (line {exc.line}, column {exc.column})"
    path = getattr(exc, "path", None)
    if path:
        location = f" at {path}"
    click.echo(f"error[{exc.kind}]: {exc.message}{location}", err=True)
    sys.exit(code)


def _load_state(kb_file: Path, budget_seconds: Optional[float] = DEFAULT_BUDGET_SECONDS) -> ServiceState:
    try:
        inputs, corpus = load_native(kb_file.read_text(encoding="utf-8"))
    except SchemaViolationError as exc:
        _fail(exc, 2)
    try:
        kb = inputs.build()
        return ServiceState.from_kb(kb, corpus, budget_seconds=budget_seconds)
    except KbirError as exc:
        _fail(exc, 1)


@click.group()
def main():
    """Ontology-backed indexing and retrieval over typed relations."""


@main.command("import")
@click.option(
    "--xtm",
    "xtm_paths",
    multiple=True,
    type=_KB_FILE,
    help="XTM document or fragment; repeat for several files.",
)
@click.option("--sidecar", "sidecar_path", type=_KB_FILE, help="JSON map of relation type to category.")
@click.option("--docs", "docs_path", type=_KB_FILE, help="JSON Lines document corpus.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
def import_command(xtm_paths, sidecar_path, docs_path, out_path):
    """Convert XTM input into a knowledge base file."""
    if not xtm_paths:
        raise click.UsageError("at least one --xtm file is required")
    sidecar = None
    if sidecar_path is not None:
        try:
            sidecar = load_sidecar(sidecar_path.read_text(encoding="utf-8"))
        except SchemaViolationError as exc:
            _fail(exc, 2)
    inputs = KbInputs()
    for path in xtm_paths:
        try:
            more, warnings = import_xtm(path.read_text(encoding="utf-8"), sidecar)
        except KbirError as exc:
            _fail(exc, 2)
        for warning in warnings:
            click.echo(f"{path}: warning: {warning}", err=True)
        inputs = inputs.merge(more)
    corpus: tuple = ()
    if docs_path is not None:
        try:
            corpus = load_corpus(docs_path.read_text(encoding="utf-8"))
        except SchemaViolationError as exc:
            _fail(exc, 2)
    try:
        kb = inputs.build()
        ServiceState.from_kb(kb, corpus)  # corpus subjects must resolve
    except KbirError as exc:
        _fail(exc, 1)
    out_path.write_text(save_native(kb, corpus), encoding="utf-8")
    click.echo(
        f"wrote {out_path}: {len(kb.facets)} facets, {len(kb.entities)} entities, "
        f"{len(kb.relation_types)} relation types, {len(kb.relation_instances)} relations, "
        f"{len(corpus)} documents"
    )


@main.command()
@click.argument("kb_file", type=_KB_FILE)
def validate(kb_file):
    """Report all findings for a knowledge base file."""
    try:
        inputs, corpus = load_native(kb_file.read_text(encoding="utf-8"))
    except SchemaViolationError as exc:
        _fail(exc, 2)
    report = validate_inputs(
        inputs.facets,
        inputs.entities,
        inputs.relation_types,
        inputs.relation_instances,
        inputs.composition_overrides,
    )
    for finding in report:
        click.echo(f"{finding.severity}[{finding.code}]: {finding.message}")
    if report.errors:
        click.echo(f"{len(report.errors)} error finding(s)", err=True)
        sys.exit(1)
    try:
        ServiceState.from_kb(inputs.build(), corpus)
    except KbirError as exc:
        _fail(exc, 1)
    click.echo("ok")


def _document_line(doc: dict) -> str:
    line = doc["title"]
    creators = doc.get("creators") or []
    if creators:
        line = "; ".join(creators) + ": " + line
    if doc.get("year") is not None:
        line += f" ({doc['year']})"
    return line


@main.command()
@click.argument("kb_file", type=_KB_FILE)
@click.option("--query-file", required=True, type=click.File("r", encoding="utf-8"), help="Query text; - for stdin.")
@click.option("--rules-file", type=click.File("r", encoding="utf-8"), help="Extra inference rules.")
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text", show_default=True)
def query(kb_file, query_file, rules_file, output_format):
    """Evaluate a query and list matching topics and their documents."""
    state = _load_state(kb_file)
    req = QueryRequest(
        query=query_file.read(),
        rules=rules_file.read() if rules_file is not None else "",
    )
    try:
        response = handle_query(state, req)
    except KbirError as exc:
        _fail(exc, 2)
    if output_format == "json":
        click.echo(json.dumps(response, indent=2, ensure_ascii=False))
        return
    for warning in response["warnings"]:
        click.echo(f"warning: {warning}", err=True)
    topics = response["topics"]
    click.echo(f"Topics ({len(topics)}):")
    for topic in topics:
        click.echo(f"  {topic['label']} ({topic['doc_count']})")
    documents = response["documents"]
    click.echo(f"Documents ({len(documents)}):")
    for doc in documents:
        click.echo(f"  {_document_line(doc)}")


@main.command()
@click.argument("kb_file", type=_KB_FILE)
@click.option("--from", "start", required=True, help="Entity id or label.")
@click.option("--max-len", default=3, show_default=True, type=click.IntRange(min=1))
def paths(kb_file, start, max_len):
    """Show the related-term neighborhood of an entity, layer by layer."""
    state = _load_state(kb_file)
    try:
        start_id = resolve_label(state.kb, start)
        layers = rt_neighborhood(state.kb, start_id, max_len)
    except KbirError as exc:
        _fail(exc, 2)
    click.echo(state.kb.label(start_id))
    for distance in sorted(layers):
        labels = sorted((state.kb.label(e) for e in layers[distance]), key=str.casefold)
        click.echo(f"  {distance}: " + (", ".join(labels) if labels else "(none)"))


@main.command()
@click.argument("kb_file", type=_KB_FILE)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--ui-dir", type=click.Path(exists=True, file_okay=False), help="Static files served at /.")
@click.option("--budget-seconds", default=DEFAULT_BUDGET_SECONDS, show_default=True, type=float)
def serve(kb_file, host, port, ui_dir, budget_seconds):
    """Serve the HTTP API, optionally together with the web client."""
    state = _load_state(kb_file, budget_seconds=budget_seconds)
    app = create_app(state, ui_dir=ui_dir)
    import uvicorn

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
