"""Command line front end: ``plots render`` and ``plots table``.

Exit codes follow the producer's convention: 0 on success, 2 for input
or recipe problems. Paths of the written images are printed one per
line, in the order they were written.
"""

from __future__ import annotations

import sys

import click

from . import __version__
from .gridfile import PlotDataError
from .recipes import PANEL_GROUPS, RecipeError
from .render import render_file, render_panels, render_table


@click.group()
@click.version_option(version=__version__, prog_name="plots")
def main():
    """Render sweep grids and reports into figures."""


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


@main.command("render")
@click.argument("csv_paths", metavar="CSV...", nargs=-1, required=True,
                type=click.Path())
@click.option("--recipe", default=None, metavar="ID",
              help="Force a preset recipe, or a panel layout like fig9.")
@click.option("--out", "out_dir", default=".", metavar="DIR",
              help="Directory for the images.")
@click.option("--format", "formats", multiple=True,
              type=click.Choice(["png", "svg"]),
              help="Restrict output formats (default: png and svg).")
def render_command(csv_paths, recipe, out_dir, formats):
    """Contour-render grid CSVs; panel recipes take the whole set."""
    formats = tuple(formats) or ("png", "svg")
    try:
        if recipe in PANEL_GROUPS:
            written = render_panels(csv_paths, out_dir, recipe, formats)
        else:
            written = []
            for path in csv_paths:
                written.extend(render_file(path, out_dir, recipe, formats))
    except (PlotDataError, RecipeError, OSError) as exc:
        _fail(str(exc))
    for path in written:
        click.echo(str(path))


@main.command("table")
@click.argument("json_path", metavar="REPORT", type=click.Path())
@click.option("--out", "out_dir", default=".", metavar="DIR",
              help="Directory for the images.")
@click.option("--format", "formats", multiple=True,
              type=click.Choice(["png", "svg"]),
              help="Restrict output formats (default: png and svg).")
def table_command(json_path, out_dir, formats):
    """Render a baseline report JSON as a summary table image."""
    formats = tuple(formats) or ("png", "svg")
    try:
        written = render_table(json_path, out_dir, formats)
    except (PlotDataError, OSError) as exc:
        _fail(str(exc))
    for path in written:
        click.echo(str(path))


if __name__ == "__main__":
    main()
