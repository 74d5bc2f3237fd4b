"""Materialize the mutant corpora shipped under tests/mutants/.

Each mutant replaces one corpus file with a copy carrying a single edit
that must be rejected at the targeted declaration.  Run from the repo
root after editing MUTATIONS; the index file drives tests/test_mutants.py.
"""

from __future__ import annotations

import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
STDLIB = ROOT / "src" / "stt" / "stdlib"
OUT = ROOT / "tests" / "mutants"

# (identifier, base file, target decl, unique old snippet, new snippet)
MUTATIONS = [
    (
        "m01_concat_projected",
        "paths.stt",
        "concat",
        "def concat (A : U) (x y z : A) (p : Id A x y) (q : Id A y z) : Id A x z :=\n  (ind-path (λ b c r ↦ Id A x b → Id A x c) (λ b ↦ λ s ↦ s) q p)",
        "def concat (A : U) (x y z : A) (p : Id A x y) (q : Id A y z) : Id A x z :=\n  p",
    ),
    (
        "m02_concat_refl_endpoints",
        "paths.stt",
        "concat",
        "(ind-path (λ b c r ↦ Id A x b → Id A x c) (λ b ↦ λ s ↦ s) q p)",
        "(ind-path (λ b c r ↦ Id A x b → Id A x c) (λ b ↦ λ s ↦ refl x) q p)",
    ),
    (
        "m03_path_inv_motive_swapped",
        "paths.stt",
        "path-inv",
        "(ind-path (λ a b q ↦ Id A b a) (λ a ↦ refl a) p)",
        "(ind-path (λ a b q ↦ Id A a b) (λ a ↦ refl a) p)",
    ),
    (
        "m04_transport_base_refl",
        "paths.stt",
        "transport",
        "(ind-path (λ a b q ↦ B a → B b) (λ a ↦ λ u ↦ u) p)",
        "(ind-path (λ a b q ↦ B a → B b) (λ a ↦ λ u ↦ refl a) p)",
    ),
    (
        "m05_singleton_center_swapped",
        "contractible.stt",
        "singleton-contr",
        "(λ b c q ↦ Id (Σ (y : A), Id A b y) (b , refl b) (c , q))",
        "(λ b c q ↦ Id (Σ (y : A), Id A b y) (c , q) (b , refl b))",
    ),
    (
        "m06_pin_endpoints_swapped",
        "hom.stt",
        "pin",
        "def pin (C : U) (a : line C) : hom C (a 0) (a 1) := λ (t : 2) ↦ (a t)",
        "def pin (C : U) (a : line C) : hom C (a 1) (a 0) := λ (t : 2) ↦ (a t)",
    ),
    (
        "m07_hom_retype_transport_flipped",
        "hom.stt",
        "hom-retype",
        "(transport C (λ u ↦ hom C u b) a x p h)",
        "(transport C (λ u ↦ hom C u b) x a p h)",
    ),
    (
        "m08_horn_branch_dropped",
        "segal.stt",
        "horn",
        "λ ((a , b) : 2 × 2) ↦ [b ≡ 0 ↦ f a , a ≡ 1 ↦ g b]",
        "λ ((a , b) : 2 × 2) ↦ [b ≡ 0 ↦ f a]",
    ),
    (
        "m09_horn_corner_clash",
        "segal.stt",
        "horn",
        "λ ((a , b) : 2 × 2) ↦ [b ≡ 0 ↦ f a , a ≡ 1 ↦ g b]",
        "λ ((a , b) : 2 × 2) ↦ [b ≡ 0 ↦ f a , a ≡ 1 ↦ g 1]",
    ),
    (
        "m10_restrict_reversed",
        "segal.stt",
        "restrict2",
        "def restrict2 (C : U) (s : triangle C) : inner-horn C :=",
        "def restrict2 (C : U) (s : inner-horn C) : triangle C :=",
    ),
    (
        "m11_diagonal_off_shape",
        "segal.stt",
        "diagonal",
        "def diagonal (C : U) (s : triangle C) : line C := λ (t : 2) ↦ s (t , t)",
        "def diagonal (C : U) (s : triangle C) : line C := λ (t : 2) ↦ s (t , 1)",
    ),
    (
        "m12_comp_corner_reversed",
        "segal.stt",
        "comp-of-filler",
        "    ((fst w) (0 , 0)) ((fst w) (1 , 1)) x z\n    (ap (inner-horn C) C (λ u ↦ corner0 C u)",
        "    ((fst w) (0 , 0)) ((fst w) (1 , 1)) x z\n    (ap (inner-horn C) C (λ u ↦ corner1 C u)",
    ),
    (
        "m13_comp_horn_swapped",
        "segal.stt",
        "comp",
        "  (comp-of-filler C x y z f g (fst (seg (horn C x y z f g))))",
        "  (comp-of-filler C x y z f g (fst (seg (horn C x y z g f))))",
    ),
    (
        "m14_degenerate_filler_wrong_leg",
        "segal.stt",
        "filler-id-right",
        "  := ((λ ((a , b) : 2 × 2) ↦ f b) ,\n      refl (restrict2 C (λ ((a , b) : 2 × 2) ↦ f b)))",
        "  := ((λ ((a , b) : 2 × 2) ↦ f a) ,\n      refl (restrict2 C (λ ((a , b) : 2 × 2) ↦ f a)))",
    ),
    (
        "m15_comp_id_wrong_filler",
        "segal.stt",
        "comp-id",
        "    (fst (seg (horn C x x y (id-arrow C x) f)))\n    (filler-id-right C x y f)\n    (snd (seg (horn C x x y (id-arrow C x) f)) (filler-id-right C x y f)))",
        "    (fst (seg (horn C x x y (id-arrow C x) f)))\n    (filler-id-left C x y f)\n    (snd (seg (horn C x x y (id-arrow C x) f)) (filler-id-left C x y f)))",
    ),
    (
        "m16_iso_id_components_swapped",
        "segal.stt",
        "iso-id",
        "  ((id-arrow C x , comp-id C seg x x (id-arrow C x)) ,\n   (id-arrow C x , comp-id C seg x x (id-arrow C x)))",
        "  ((comp-id C seg x x (id-arrow C x) , id-arrow C x) ,\n   (id-arrow C x , comp-id C seg x x (id-arrow C x)))",
    ),
    (
        "m17_path_to_arrow_reversed",
        "segal.stt",
        "path-to-arrow",
        "(ind-path (λ a b q ↦ hom C a b) (λ a ↦ id-arrow C a) p)",
        "(ind-path (λ a b q ↦ hom C b a) (λ a ↦ id-arrow C a) p)",
    ),
    (
        "m18_cov_transport_source",
        "covariant.stt",
        "cov-transport",
        "  ((fst (fst (cov x y f u))) 1)",
        "  ((fst (fst (cov x y f u))) 0)",
    ),
    (
        "m19_const_lift_wrong_base",
        "covariant.stt",
        "const-lift",
        "  := ((λ (t : 2) ↦ u) , refl u)",
        "  := ((λ (t : 2) ↦ u) , refl x)",
    ),
    (
        "m20_id_transport_wrong_end",
        "covariant.stt",
        "id-transport",
        "    (λ w ↦ (fst w) 1)",
        "    (λ w ↦ (fst w) 0)",
    ),
    (
        "m21_yoneda_inv_constant",
        "yoneda.stt",
        "yoneda-inv",
        "  λ x f ↦ (cov-transport C F cov c x f u)",
        "  λ x f ↦ u",
    ),
    (
        "m22_yoneda_comput_by_refl",
        "yoneda.stt",
        "yoneda-comput",
        "  (id-transport C F cov c u)",
        "  refl u",
    ),
    (
        "m23_path_to_eq_pair_swapped",
        "univalence.stt",
        "path-to-eq",
        "(ind-path (λ X Y q ↦ Equiv X Y) (λ X ↦ (idfun X , id-isEquiv X)) p)",
        "(ind-path (λ X Y q ↦ Equiv X Y) (λ X ↦ (id-isEquiv X , idfun X)) p)",
    ),
    (
        "m24_magma_untyped_codomain",
        "directed.stt",
        "Magma",
        "def Magma : U₁ := Σ (A : S), (S-pt A × S-pt A → S-pt A)",
        "def Magma : U₁ := Σ (A : S), (S-pt A × S-pt A → A)",
    ),
    (
        "m25_arr_of_fun_wrong_projection",
        "directed.stt",
        "arr-of-fun",
        "def arr-of-fun (A : S) (B : S) (g : S-pt A → S-pt B) : hom-S A B :=\n  (fst (fst (dua A B g)))",
        "def arr-of-fun (A : S) (B : S) (g : S-pt A → S-pt B) : hom-S A B :=\n  (snd (fst (dua A B g)))",
    ),
    (
        "m26_id_arrow_not_extension",
        "hom.stt",
        "id-arrow",
        "def id-arrow (C : U) (x : C) : hom C x x := λ (t : 2) ↦ x",
        "def id-arrow (C : U) (x : C) : C := λ (t : 2) ↦ x",
    ),
]


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    index_lines = []
    for ident, base, target, old, new in MUTATIONS:
        src = (STDLIB / base).read_text(encoding="utf-8")
        count = src.count(old)
        if count != 1:
            raise SystemExit(f"{ident}: snippet occurs {count} times in {base}")
        mutated = src.replace(old, new)
        out_name = f"{ident}.stt"
        (OUT / out_name).write_text(mutated, encoding="utf-8")
        index_lines.append(f"{out_name} | {base} | {target}")
    (OUT / "index.txt").write_text(
        "# mutant file | corpus file it replaces | declaration that must reject\n"
        + "\n".join(index_lines)
        + "\n",
        encoding="utf-8",
    )
    print(f"wrote {len(MUTATIONS)} mutants to {OUT}")


if __name__ == "__main__":
    main()
