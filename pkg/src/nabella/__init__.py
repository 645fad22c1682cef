"""An interactive prover for a logic with generic judgments and
(co)inductive definitions, with an embedded executable specification logic."""

__version__ = "0.1.0"
