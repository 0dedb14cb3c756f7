use std::sync::OnceLock;

use proptest::prelude::*;

use cayley_wreath::automata::{convolve, deconvolve};
use cayley_wreath::fixtures;
use cayley_wreath::groups::{HElement, WreathElement};
use cayley_wreath::word_problem::{crosscheck, prefix_coherent, solve, Verdict};
use cayley_wreath::wreath::WreathStructure;

fn structures() -> &'static [WreathStructure] {
    static CELL: OnceLock<Vec<WreathStructure>> = OnceLock::new();
    CELL.get_or_init(|| {
        vec![
            fixtures::lamplighter().unwrap(),
            fixtures::z2_wr_dihedral().unwrap(),
            fixtures::z3_wr_z_z5().unwrap(),
            fixtures::integers_wr_integers().unwrap(),
        ]
    })
}

fn ws_and_word(max_len: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..structures().len()).prop_flat_map(move |s| {
        let k = structures()[s].group().generators().len();
        (Just(s), prop::collection::vec(0..k, 0..=max_len))
    })
}

fn element(ws: &WreathStructure, lamps: &[(i64, usize, i64)], pos: (i64, usize)) -> WreathElement {
    let m = ws.m();
    let values = ws.group().base().elements().unwrap_or_else(|| vec![-2, -1, 1, 2]);
    let lamps = lamps.iter().map(|&(k, q, v)| (HElement::new(k, q % (m + 1)), values[v.rem_euclid(values.len() as i64) as usize]));
    ws.group().element(lamps, HElement::new(pos.0, pos.1 % (m + 1)))
}

type Lamps = Vec<(i64, usize, i64)>;

fn ws_and_element() -> impl Strategy<Value = (usize, Lamps, (i64, usize))> {
    (0..structures().len(), prop::collection::vec((-4i64..=4, 0usize..8, 0i64..8), 0..5), (-4i64..=4, 0usize..8))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h_is_a_group(s in 0..4usize, a in (-4i64..=4, 0usize..8), b in (-4i64..=4, 0usize..8), c in (-4i64..=4, 0usize..8)) {
        let h = structures()[s].hspec();
        let n = h.m() + 1;
        let (a, b, c) = (HElement::new(a.0, a.1 % n), HElement::new(b.0, b.1 % n), HElement::new(c.0, c.1 % n));
        prop_assert_eq!(h.mult(h.mult(a, b), c), h.mult(a, h.mult(b, c)));
        prop_assert_eq!(h.mult(a, h.inverse(a)), HElement::IDENTITY);
        prop_assert_eq!(h.mult(h.inverse(a), a), HElement::IDENTITY);
    }

    #[test]
    fn wreath_oracle_is_a_group((s, w1) in ws_and_word(8), w2 in prop::collection::vec(0usize..4, 0..6)) {
        let g = structures()[s].group();
        let a = g.eval_indices(&w1);
        let b = g.eval_indices(&w2);
        let c = g.eval_indices(&w1.iter().rev().copied().collect::<Vec<_>>());
        prop_assert_eq!(g.mult(&g.mult(&a, &b), &c), g.mult(&a, &g.mult(&b, &c)));
        prop_assert_eq!(g.mult(&a, &g.inverse(&a)), g.identity());
    }

    #[test]
    fn encode_decode_roundtrip((s, lamps, pos) in ws_and_element()) {
        let ws = &structures()[s];
        let v = element(ws, &lamps, pos);
        let w = ws.encode(&v);
        prop_assert!(ws.language().accepts(&w));
        prop_assert_eq!(ws.decode(&w).unwrap(), v);
    }

    #[test]
    fn normal_forms_have_one_marker_of_each_kind((s, lamps, pos) in ws_and_element()) {
        let ws = &structures()[s];
        let w = ws.encode(&element(ws, &lamps, pos));
        let a = ws.alphabet();
        prop_assert_eq!(w.iter().filter(|&&x| x == a.b0()).count(), 1);
        prop_assert_eq!(w.iter().filter(|&&x| x == a.cstar()).count(), 1);
        let blocks = w.iter().filter(|&&x| a.is_beta(x)).count();
        prop_assert_eq!(w.iter().filter(|&&x| a.is_gamma(x)).count(), blocks * (ws.m() + 1));
        prop_assert_eq!(blocks, ws.group().support_info(&element(ws, &lamps, pos)).width());
    }

    #[test]
    fn multipliers_follow_the_oracle((s, lamps, pos) in ws_and_element(), gen in 0usize..16) {
        let ws = &structures()[s];
        let gens = ws.group().generators();
        let i = gen % gens.len();
        let v = element(ws, &lamps, pos);
        let u = ws.encode(&v);
        let next = ws.apply(i, &u).unwrap();
        prop_assert_eq!(&next, &ws.encode(&ws.group().mult_generator(&v, i)));
        // and back again through the inverse generator
        prop_assert_eq!(ws.apply(gens.inverse_of(i), &next).unwrap(), u);
    }

    #[test]
    fn solver_matches_oracle((s, w) in ws_and_word(24)) {
        let ws = &structures()[s];
        prop_assert!(crosscheck(ws, &w));
        prop_assert!(prefix_coherent(ws, &w));
    }

    #[test]
    fn word_times_inverse_is_trivial((s, w) in ws_and_word(16)) {
        let ws = &structures()[s];
        let gens = ws.group().generators();
        let mut full = w.clone();
        full.extend(w.iter().rev().map(|&i| gens.inverse_of(i)));
        let trace = solve(ws, &full).unwrap();
        prop_assert_eq!(trace.verdict, Some(Verdict::Trivial));
        prop_assert_eq!(trace.forms.len(), full.len() + 1);
        prop_assert_eq!(trace.relation_sizes.len(), full.len());
    }

    #[test]
    fn convolution_roundtrip((s, lamps, pos) in ws_and_element(), (_, lamps2, pos2) in ws_and_element()) {
        let ws = &structures()[s];
        let u = ws.encode(&element(ws, &lamps, pos));
        let v = ws.encode(&element(ws, &lamps2, pos2));
        let pairs = ws.alphabet().pairs();
        let conv = convolve(pairs, &u, &v);
        prop_assert_eq!(conv.len(), u.len().max(v.len()));
        prop_assert_eq!(deconvolve(pairs, &conv).unwrap(), (u, v));
    }
}
