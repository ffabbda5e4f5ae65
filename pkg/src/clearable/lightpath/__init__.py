from .core import BLACK, GRAY, WHITE, LightPathArray, LightPathTree, RootCell

__all__ = ["WHITE", "GRAY", "BLACK", "LightPathTree", "LightPathArray", "RootCell"]
