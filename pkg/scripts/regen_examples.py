#!/usr/bin/env python3
"""Regenerate the bundled example files under src/varietal/data/.

Run from the repository root after changing the catalog builders; the files
are committed so that golden tests and the CLI examples are stable.
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from varietal import fileformat
from varietal.algebra import enumerate_algebras
from varietal.catalog import (
    bit_reader_algebra,
    boolean_rig,
    constant_nu_algebra,
    cyclic_monoid_algebra,
    global_state_presentation,
    graph_presheaf,
    internal_category_presentation,
    matrix_clone,
    max_semilattice_algebra,
    monoid_presentation,
    reading_bits_presentation,
    restriction_presentation,
    rig_module_presentation,
    rig_self_module,
    semilattice_presentation,
    state_clone,
    state_transformer_algebra,
    z2_rig,
)
from varietal.pretheory import kleisli_pretheory
from varietal.base import finite_set, trivial_index

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "varietal" / "data"


def write(name: str, nodes):
    path = DATA / name
    path.write_text(fileformat.render(nodes), encoding="utf-8")
    print(f"wrote {path}")


def main():
    DATA.mkdir(parents=True, exist_ok=True)

    SL = semilattice_presentation()
    write("semilattice.var", fileformat.presentation_nodes(SL))
    write("chain2.alg", fileformat.algebra_nodes(
        "chain2", max_semilattice_algebra(SL, 2), presentation=SL))

    MO = monoid_presentation()
    write("monoid.var", fileformat.presentation_nodes(MO))
    write("zmod3.alg", fileformat.algebra_nodes(
        "zmod3", cyclic_monoid_algebra(MO, 3), presentation=MO))

    GS = global_state_presentation(2, 1)
    write("globalstate.var", fileformat.presentation_nodes(GS))
    write("state1.alg", fileformat.algebra_nodes(
        "state1", state_transformer_algebra(GS, 1), presentation=GS))

    for rig in (boolean_rig(), z2_rig()):
        RM = rig_module_presentation(rig)
        write(f"{rig.name}mod.var", fileformat.presentation_nodes(RM))
        write(f"{rig.name}self.alg", fileformat.algebra_nodes(
            f"{rig.name}self", rig_self_module(RM, rig), presentation=RM))

    IC = internal_category_presentation()
    write("internalcat.var", fileformat.presentation_nodes(IC.base))
    loop = graph_presheaf(1, [(0, 0)])
    model = IC.models_on(loop)[0]
    write("cat_loop.alg", fileformat.algebra_nodes(
        "cat_loop", model, presentation=IC.base))

    RB = reading_bits_presentation(2)
    write("readbits.var", fileformat.presentation_nodes(RB))
    write("reader2.alg", fileformat.algebra_nodes(
        "reader2", bit_reader_algebra(RB, 2), presentation=RB))

    RS = restriction_presentation(2)
    write("restriction.var", fileformat.presentation_nodes(RS))
    write("nufirst.alg", fileformat.algebra_nodes(
        "nufirst", constant_nu_algebra(RS, 3), presentation=RS))

    write("state_clone.rm", fileformat.relmonad_nodes(
        state_clone([1, 2], 2), name="state_clone"))
    write("z2mat.rm", fileformat.relmonad_nodes(
        matrix_clone(z2_rig(), [1, 2]), name="z2mat"))
    write("z2aff.rm", fileformat.relmonad_nodes(
        matrix_clone(z2_rig(), [1, 2], affine=True), name="z2aff"))

    I = trivial_index()
    KT = kleisli_pretheory(SL, [finite_set(1, I), finite_set(2, I)], 3)
    write("kleisli_semilattice.pt", fileformat.pretheory_nodes(
        KT, name="kleisli_semilattice"))

    # a signature-plus-witnesses bundle for the birkhoff subcommand
    nodes = fileformat.presentation_nodes(SL)
    nodes += fileformat.algebra_nodes(
        "chain2", max_semilattice_algebra(SL, 2), presentation=SL)
    write("semilattice_gen.algs", nodes)


if __name__ == "__main__":
    main()
