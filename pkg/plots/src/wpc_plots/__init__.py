from .render import PlotSpec, load_rows, render

__all__ = ["PlotSpec", "load_rows", "render"]
