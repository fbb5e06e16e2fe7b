"""Laboratory for implicative intuitionistic logic under game semantics.

Decides the implicative fragment, builds the canonical game form of
unprovable formulas, and demonstrates non-validity by playing the game
against scripted or human adversaries while constructing the
counterinterpretation under which the adversary loses.
"""

__version__ = "0.1.0"
