"""Shared fixtures: one curve-graph adapter per session so the memoized
adjacency, ladder, and interval tables amortize across every test module."""

from __future__ import annotations

import pytest

from heegaard.curvegraph import CurveGraphAdapter


@pytest.fixture(scope="session")
def genus2_graph() -> CurveGraphAdapter:
    return CurveGraphAdapter(2, bound=2)
