from pathlib import Path
from typing import Optional, Union

from jinja2 import Environment, FileSystemLoader

from knotpursuit.errors import InputError
from knotpursuit.models import ExperimentReport

TEMPLATES_DIR = Path(__file__).resolve().parent.parent / "templates"

_env = Environment(
    loader=FileSystemLoader(str(TEMPLATES_DIR)),
    keep_trailing_newline=True,
    trim_blocks=True,
)


def _fmt(value: Optional[float], spec: str) -> str:
    return "-" if value is None else spec % value


_env.globals["fmt"] = _fmt


def render_report(report: ExperimentReport) -> str:
    template = _env.get_template(f"{report.table}.txt.j2")
    return template.render(report=report)


def write_report(report: ExperimentReport, path: Union[str, Path], fmt: str = "text") -> Path:
    path = Path(path)
    if fmt == "json":
        path.write_text(report.model_dump_json(indent=2))
    elif fmt == "text":
        path.write_text(render_report(report))
    else:
        raise InputError(f"unknown report format {fmt!r}")
    return path
