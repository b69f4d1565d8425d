"""feelgrid: interactive tactile pin-grid chart sessions.

Declarative chart specs render onto a simulated 60x40 refreshable pin
display; touch gestures and buttons drive selection, panning, and zooming;
typed queries fuse with touch context for deictic data questions; answers
come back as synchronized tactile, Braille, and timed speech-text output.
"""

__version__ = "0.1.0"
