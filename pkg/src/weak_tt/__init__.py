"""Weak traitor-tracing schemes and the hardness-of-privacy reduction,
executable at desk scale.

Subpackages: :mod:`weak_tt.primitives` (PRG, GGM PRFs, puncturing),
:mod:`weak_tt.obf` (transparent obfuscation and program descriptors),
:mod:`weak_tt.short_ctext` / :mod:`weak_tt.short_key` (the two schemes),
:mod:`weak_tt.games` (security-game harnesses), :mod:`weak_tt.dp_attack`
(statistical queries, mechanisms, and the tracer), :mod:`weak_tt.stats`
(exact distributional computations), and :mod:`weak_tt.cli`.
"""

__version__ = "0.1.0"
