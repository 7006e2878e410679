"""Print every shipped fixture with its bracket in each applicable variant,
its writhe and its normalized bracket."""
from __future__ import annotations

from pseudolinks.bracket import Variant, bracket, normalized_bracket
from pseudolinks.diagram import writhe
from pseudolinks.fixtures import fixture_document, fixture_names, load_fixture
from pseudolinks.poly import render_canonical


def main() -> None:
    for name in fixture_names():
        d = load_fixture(name)
        print(f"{name}: {d.surface.value}, {d.n_crossings} crossings "
              f"({len(d.precrossings())} pre), writhe {writhe(d)}")
        print(f"  {fixture_document(name).get('description', '')}")
        for v in Variant:
            if v.surface == d.surface:
                print(f"  {v.value:19s} {render_canonical(bracket(d, v))}")
        print(f"  {'normalized':19s} {render_canonical(normalized_bracket(d))}")


if __name__ == "__main__":
    main()
