"""Uniform facade over the two schemes for the game and attack harnesses."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from . import short_ctext, short_key
from .errors import ConfigurationError

SHORT_CTEXT = "short-ctext"
SHORT_KEY = "short-key"


@dataclass(frozen=True)
class SchemeOps:
    name: str
    make_params: Callable[..., Any]
    setup: Callable[[Any, bytes], Any]
    encrypt: Callable[[Any, int, bytes], Any]
    decrypt: Callable[[Any, Any], Any]

    def master(self, setup_result):
        return setup_result.master

    def users(self, setup_result):
        return setup_result.users


_SCHEMES = {
    SHORT_CTEXT: SchemeOps(
        name=SHORT_CTEXT,
        make_params=short_ctext.SchemeParamsSC,
        setup=short_ctext.setup,
        encrypt=short_ctext.encrypt,
        decrypt=short_ctext.decrypt,
    ),
    SHORT_KEY: SchemeOps(
        name=SHORT_KEY,
        make_params=short_key.SchemeParamsSK,
        setup=short_key.setup,
        encrypt=short_key.encrypt,
        decrypt=short_key.decrypt,
    ),
}


def scheme_ops(name: str) -> SchemeOps:
    try:
        return _SCHEMES[name]
    except KeyError:
        raise ConfigurationError(f"unknown scheme {name!r}; expected one of {sorted(_SCHEMES)}") from None
