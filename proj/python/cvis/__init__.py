"""Circular visibility queries in arc-spline channels."""

from ._core import (
    Certificate,
    Channel,
    CvisError,
    RestrictionPoint,
    check_channel,
    fixture,
    fixture_names,
    oracle,
    query,
    random_meander,
    random_star,
    render_svg,
    verify,
)

__all__ = [
    "Certificate",
    "Channel",
    "CvisError",
    "RestrictionPoint",
    "check_channel",
    "fixture",
    "fixture_names",
    "oracle",
    "query",
    "random_meander",
    "random_star",
    "render_svg",
    "verify",
]
