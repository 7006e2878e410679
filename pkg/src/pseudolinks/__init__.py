"""Pseudo bracket and Jones-type invariants of pseudo link diagrams on the
plane, annulus and torus."""
