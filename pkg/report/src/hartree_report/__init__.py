"""Report builder for hartreelab output directories."""

from .render import ReportSpec, render_report

__version__ = "0.1.0"
