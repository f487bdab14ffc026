"""
Annotated field types for certificate serialization.

Big integers are written as decimal strings and certified reals as
``{"value": <10 significant digits>, "radius": <3 significant digits>}``.
"""
from typing import Annotated, Any

from pydantic import BeforeValidator, PlainSerializer

from shared.realcore import CReal


def _real_to_json(value: CReal) -> dict[str, str]:
    return {"value": value.to_decimal(10), "radius": value.radius_decimal()}


def _int_from_text(value: Any) -> Any:
    if isinstance(value, str):
        return int(value)
    return value


BigInt = Annotated[
    int,
    BeforeValidator(_int_from_text),
    PlainSerializer(str, return_type=str, when_used="json"),
]

Real = Annotated[CReal, PlainSerializer(_real_to_json, return_type=dict)]
