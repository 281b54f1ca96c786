"""Bandwidth classification of deterministic timed automata.

Structural verdicts (meager / normal / obese, thin / thick) are computed from
finite orbit monoids over the region-split form, and cross-validated by
grid-based epsilon-capacity estimation on the timed-word language.
"""

from .classify import Verdict, classify
from .splitting import RegionSplitAutomaton, region_split
from .ta import TimedAutomaton, check_deterministic, parse_automaton, \
    serialize_automaton
from .words import TimedWord, distance, timed_word

__version__ = "0.1.0"

__all__ = [
    "TimedAutomaton", "RegionSplitAutomaton", "TimedWord", "Verdict",
    "parse_automaton", "serialize_automaton", "check_deterministic",
    "region_split", "classify", "distance", "timed_word", "__version__",
]
