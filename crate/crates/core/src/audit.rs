//! Exhaustive and randomized checks of a [`WreathStructure`] against the
//! brute-force group oracle.
//!
//! Every check returns the number of cases it covered, or the first
//! counterexample. Output of [`verify`] is deterministic for a given seed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{deconvolve, transpose, Symbol};
use crate::groups::{GElem, Generator, HElement, WreathElement};
use crate::par::Exec;
use crate::wreath::{build_lamp_multiplier, build_move_multiplier, c_index_of_cstar, project_markers, WreathStructure};
use crate::word_problem::{crosscheck, prefix_coherent, solve};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{check}: {detail}")]
pub struct AuditFailure {
    pub check: &'static str,
    pub detail: String,
}

fn fail(check: &'static str, detail: impl Into<String>) -> AuditFailure {
    AuditFailure { check, detail: detail.into() }
}

/// Every element whose normal form has length at most `n`, generated from
/// the group side: support intervals that fit the block budget, lamp values
/// drawn from base normal forms that fit what is left.
pub fn oracle_elements_within(ws: &WreathStructure, n: usize) -> Vec<WreathElement> {
    let g = ws.group();
    let block = ws.m() + 2;
    let max_blocks = n / block;
    if max_blocks == 0 {
        return Vec::new();
    }
    // (value, cost) for every non-identity base element of cost <= n
    let base = ws.base();
    let values: Vec<(GElem, usize)> =
        base.language().enumerate(n - block).into_iter().filter(|w| !w.is_empty()).map(|w| (base.evaluate(&w), w.len())).collect();
    let reach = max_blocks as i64 - 1;
    let mut out = BTreeSet::new();
    for m1 in -reach..=0 {
        for m2 in 0..=(m1 + reach) {
            let blocks = (m2 - m1 + 1) as usize;
            let budget = n - blocks * block;
            let sites = ws.hspec().window_range(m1, m2);
            let mut configs = Vec::new();
            lamp_budget(&sites, &values, budget, &mut Vec::new(), &mut configs);
            for lamps in configs {
                for &pos in &sites {
                    let v = g.element(lamps.iter().copied(), pos);
                    let info = g.support_info(&v);
                    if info.m1 == m1 && info.m2 == m2 {
                        out.insert(ElemKey(v));
                    }
                }
            }
        }
    }
    out.into_iter().map(|k| k.0).collect()
}

fn lamp_budget(
    sites: &[HElement],
    values: &[(GElem, usize)],
    budget: usize,
    cur: &mut Vec<(HElement, GElem)>,
    out: &mut Vec<Vec<(HElement, GElem)>>,
) {
    let Some((&site, rest)) = sites.split_first() else {
        out.push(cur.clone());
        return;
    };
    lamp_budget(rest, values, budget, cur, out);
    for &(val, cost) in values {
        if cost <= budget {
            cur.push((site, val));
            lamp_budget(rest, values, budget - cost, cur, out);
            cur.pop();
        }
    }
}

// ordering wrapper so oracle elements can be deduplicated
#[derive(PartialEq, Eq)]
struct ElemKey(WreathElement);

impl Ord for ElemKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.position(), self.0.support()).cmp(&(other.0.position(), other.0.support()))
    }
}

impl PartialOrd for ElemKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// `enumerate(L, n)` equals the set of encodings of oracle elements of
/// normal-form length at most `n`.
pub fn check_language_exactness(ws: &WreathStructure, n: usize, elements: &[WreathElement]) -> Result<usize, AuditFailure> {
    const CHECK: &str = "language exactness";
    let from_l: BTreeSet<Vec<Symbol>> = ws.language().enumerate(n).into_iter().collect();
    let from_g: BTreeSet<Vec<Symbol>> = elements.iter().map(|v| ws.encode(v)).filter(|w| w.len() <= n).collect();
    if let Some(w) = from_l.difference(&from_g).next() {
        return Err(fail(CHECK, format!("{} is in L but encodes no listed element", ws.format_word(w))));
    }
    if let Some(w) = from_g.difference(&from_l).next() {
        return Err(fail(CHECK, format!("{} encodes an element but is not in L", ws.format_word(w))));
    }
    Ok(from_l.len())
}

/// `encode(decode(w)) = w` and marker discipline on `enumerate(L, n)`.
pub fn check_word_roundtrip(ws: &WreathStructure, n: usize, exec: Exec) -> Result<usize, AuditFailure> {
    const CHECK: &str = "normal-form roundtrip";
    let words = ws.language().enumerate(n);
    let a = ws.alphabet();
    let m = ws.m();
    let bad = exec.find_failure(&words, |w| {
        let count = |s| w.iter().filter(|&&x| x == s).count();
        if count(a.b0()) != 1 || count(a.cstar()) != 1 {
            return Some(fail(CHECK, format!("{} breaks the single-marker rule", ws.format_word(w))));
        }
        let blocks = w.iter().filter(|&&s| a.is_beta(s)).count();
        let gammas = w.iter().filter(|&&s| a.is_gamma(s)).count();
        if !a.is_beta(w[0]) || gammas != blocks * (m + 1) {
            return Some(fail(CHECK, format!("{} is not block-shaped", ws.format_word(w))));
        }
        match ws.decode(w) {
            Ok(v) if ws.encode(&v) == *w => None,
            Ok(v) => Some(fail(CHECK, format!("{} decodes to {} which encodes differently", ws.format_word(w), ws.group().describe(&v)))),
            Err(e) => Some(fail(CHECK, e.to_string())),
        }
    });
    bad.map_or(Ok(words.len()), Err)
}

/// `decode(encode(g)) = g` and `encode` injective on `elements`.
pub fn check_element_roundtrip(ws: &WreathStructure, elements: &[WreathElement], exec: Exec) -> Result<usize, AuditFailure> {
    const CHECK: &str = "element roundtrip";
    let encoded = exec.map(elements, |v| ws.encode(v));
    let bad = exec.find_failure(&(0..elements.len()).collect::<Vec<_>>(), |&i| match ws.decode(&encoded[i]) {
        Ok(d) if d == elements[i] => None,
        Ok(d) => Some(fail(CHECK, format!("{} came back as {}", ws.group().describe(&elements[i]), ws.group().describe(&d)))),
        Err(e) => Some(fail(CHECK, format!("{}: {e}", ws.group().describe(&elements[i])))),
    });
    if let Some(f) = bad {
        return Err(f);
    }
    let distinct: BTreeSet<&Vec<Symbol>> = encoded.iter().collect();
    if distinct.len() != elements.len() {
        return Err(fail(CHECK, "two elements share a normal form"));
    }
    Ok(elements.len())
}

/// Completeness and functionality: `R_a` maps each `u ∈ enumerate(L, n)` to
/// exactly `encode(decode(u)·a)`, for every generator.
pub fn check_multipliers(ws: &WreathStructure, n: usize, exec: Exec) -> Result<usize, AuditFailure> {
    const CHECK: &str = "multiplier completeness";
    let words = ws.language().enumerate(n);
    let g = ws.group();
    let gens = g.generators();
    let bad = exec.find_failure(&words, |u| {
        let du = ws.decode(u).expect("enumerated words lie in L");
        (0..gens.len()).find_map(|i| {
            let want = ws.encode(&g.mult_generator(&du, i));
            match ws.apply(i, u) {
                Ok(v) if v == want => None,
                Ok(v) => Some(fail(
                    CHECK,
                    format!("{} · {} gave {}, expected {}", ws.format_word(u), gens.name(i), ws.format_word(&v), ws.format_word(&want)),
                )),
                Err(e) => Some(fail(CHECK, format!("{} · {}: {e}", ws.format_word(u), gens.name(i)))),
            }
        })
    });
    bad.map_or(Ok(words.len() * gens.len()), Err)
}

/// Soundness: every pair accepted by `R_a` whose convolution has length at
/// most `n` satisfies `decode(v) = decode(u)·a`.
pub fn check_multiplier_soundness(ws: &WreathStructure, n: usize, exec: Exec) -> Result<usize, AuditFailure> {
    const CHECK: &str = "multiplier soundness";
    let g = ws.group();
    let gens: Vec<usize> = (0..g.generators().len()).collect();
    let counts = exec.try_map(&gens, |&i| {
        let pairs = ws.multiplier(i).enumerate(n);
        for p in &pairs {
            let (u, v) = deconvolve(ws.alphabet().pairs(), p).map_err(|e| fail(CHECK, e.to_string()))?;
            let (du, dv) = match (ws.decode(&u), ws.decode(&v)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => return Err(fail(CHECK, format!("R_{} accepts a pair outside L × L", g.generators().name(i)))),
            };
            if g.mult_generator(&du, i) != dv {
                return Err(fail(
                    CHECK,
                    format!("R_{} accepts ({}, {})", g.generators().name(i), ws.format_word(&u), ws.format_word(&v)),
                ));
            }
        }
        Ok(pairs.len())
    })?;
    Ok(counts.iter().sum())
}

/// `R_{a⁻¹}`, rebuilt directly from `a⁻¹`, is language-equal to the converse
/// of `R_a`.
pub fn check_inverse_coherence(ws: &WreathStructure, exec: Exec) -> Result<usize, AuditFailure> {
    const CHECK: &str = "inverse coherence";
    let gens = ws.group().generators();
    let guard = ws.language_pair_guard().map_err(|e| fail(CHECK, e.to_string()))?;
    let forward: Vec<usize> = (0..gens.len()).filter(|&i| gens.is_forward(i)).collect();
    exec.try_map(&forward, |&i| {
        let inv = gens.inverse_of(i);
        let direct = match gens.action(inv) {
            Generator::Lamp(_) => {
                let bi = ws.base().generator_index(gens.name(inv)).expect("lamp generators come from the base");
                build_lamp_multiplier(ws, bi, &guard)
            }
            Generator::Move(h) => build_move_multiplier(ws, h, &guard),
        }
        .map_err(|e| fail(CHECK, e.to_string()))?;
        let conv = transpose(ws.multiplier(i)).map_err(|e| fail(CHECK, e.to_string()))?;
        match direct.equivalent(&conv) {
            Ok(true) => Ok(()),
            Ok(false) => Err(fail(CHECK, format!("R_{} differs from the converse of R_{}", gens.name(inv), gens.name(i)))),
            Err(e) => Err(fail(CHECK, e.to_string())),
        }
    })?;
    Ok(forward.len())
}

/// On same-support pairs of a moving generator, the `C*` offset counted in
/// `C` letters is the tabulated constant, and in the marker projection it
/// is off by at most the `B0` letter.
pub fn check_shift_law(ws: &WreathStructure, n: usize) -> Result<usize, AuditFailure> {
    const CHECK: &str = "shift-constant law";
    let g = ws.group();
    let gens = g.generators();
    let a = ws.alphabet();
    let mut cases = 0;
    for u in ws.language().enumerate(n) {
        let du = ws.decode(&u).expect("enumerated words lie in L");
        let iu = g.support_info(&du);
        for i in 0..gens.len() {
            if !matches!(gens.action(i), Generator::Move(_)) {
                continue;
            }
            let dv = g.mult_generator(&du, i);
            let iv = g.support_info(&dv);
            if (iu.m1, iu.m2) != (iv.m1, iv.m2) {
                continue;
            }
            let v = ws.encode(&dv);
            let entry = ws.shifts().get(gens.name(i), du.position().q).ok_or_else(|| fail(CHECK, "missing table entry"))?;
            let x = c_index_of_cstar(a, &u).expect("normal forms hold C*") as i64;
            let y = c_index_of_cstar(a, &v).expect("normal forms hold C*") as i64;
            if x - y != entry.s {
                return Err(fail(
                    CHECK,
                    format!("{} · {}: offset {} but table says {}", ws.format_word(&u), gens.name(i), x - y, entry.s),
                ));
            }
            let pos = |w: &[Symbol]| project_markers(a, w).iter().position(|&s| s == a.cstar()).expect("C* survives") as i64;
            if (pos(&u) - pos(&v) - entry.s).abs() > 1 {
                return Err(fail(CHECK, format!("{} · {}: projected offset out of range", ws.format_word(&u), gens.name(i))));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// Uniform random words over all generators (inverses included).
pub fn random_words(ws: &WreathStructure, count: usize, max_len: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = ws.group().generators().len();
    (0..count)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            (0..len).map(|_| rng.gen_range(0..k)).collect()
        })
        .collect()
}

/// Random words of exactly `len` letters.
pub fn random_words_of_len(ws: &WreathStructure, count: usize, len: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = ws.group().generators().len();
    (0..count).map(|_| (0..len).map(|_| rng.gen_range(0..k)).collect()).collect()
}

/// What the last letter of a word does to the support interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Branch {
    SameSupport,
    LeftExtension,
    RightExtension,
    LeftRetraction,
    RightRetraction,
    SingleCoset,
    Lamp,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Branch::SameSupport => "same support",
            Branch::LeftExtension => "left extension",
            Branch::RightExtension => "right extension",
            Branch::LeftRetraction => "left retraction",
            Branch::RightRetraction => "right retraction",
            Branch::SingleCoset => "single coset",
            Branch::Lamp => "lamp",
        };
        f.write_str(s)
    }
}

/// Classify the final letter of `word` by the oracle.
pub fn classify(ws: &WreathStructure, word: &[usize]) -> Option<Branch> {
    let (&last, prefix) = word.split_last()?;
    let g = ws.group();
    let before = g.eval_indices(prefix);
    if matches!(g.generators().action(last), Generator::Lamp(_)) {
        return Some(Branch::Lamp);
    }
    let after = g.mult_generator(&before, last);
    if before.support().is_empty() && after.support().is_empty() {
        return Some(Branch::SingleCoset);
    }
    let (b, a) = (g.support_info(&before), g.support_info(&after));
    Some(if (b.m1, b.m2) == (a.m1, a.m2) {
        Branch::SameSupport
    } else if a.m1 < b.m1 {
        Branch::LeftExtension
    } else if a.m2 > b.m2 {
        Branch::RightExtension
    } else if a.m1 > b.m1 {
        Branch::LeftRetraction
    } else {
        Branch::RightRetraction
    })
}

/// Hand-shaped words that drive the position past either end of the support,
/// back inside it, and around a lamp-free coset, ending in each moving
/// generator.
pub fn targeted_words(ws: &WreathStructure) -> Vec<Vec<usize>> {
    let gens = ws.group().generators();
    let t = gens.index("t").expect("t is a generator");
    let ti = gens.inverse_of(t);
    let movers: Vec<usize> = (0..gens.len()).filter(|&i| matches!(gens.action(i), Generator::Move(_))).collect();
    let lamps: Vec<usize> = (0..gens.len()).filter(|&i| matches!(gens.action(i), Generator::Lamp(_))).collect();
    let lamp = lamps[0];
    let rep = |x: usize, n: usize| std::iter::repeat_n(x, n);
    let mut prefixes: Vec<Vec<usize>> = vec![Vec::new()];
    for n in 1..=3 {
        prefixes.push(rep(t, n).collect());
        prefixes.push(rep(ti, n).collect());
        // lamp at 0 and at ±n, position back at 0 or at either end
        for (fwd, back) in [(t, ti), (ti, t)] {
            let mut w = vec![lamp];
            w.extend(rep(fwd, n));
            w.push(lamp);
            prefixes.push(w.clone());
            w.extend(rep(back, n));
            prefixes.push(w.clone());
            w.extend(rep(back, 1));
            prefixes.push(w);
        }
    }
    for &x in &movers {
        // position inside a coset away from column 0
        prefixes.push(vec![lamp, x, lamp]);
        prefixes.push(vec![t, x, lamp, ti]);
    }
    let mut out = Vec::new();
    for p in &prefixes {
        for &x in &movers {
            let mut w = p.clone();
            w.push(x);
            out.push(w.clone());
            for &y in &movers {
                let mut w2 = w.clone();
                w2.push(y);
                out.push(w2);
            }
        }
        let mut w = p.clone();
        w.extend(lamps.iter().copied());
        out.push(w);
    }
    out.sort();
    out.dedup();
    out
}

/// `crosscheck` on every word; returns the number checked.
pub fn check_words(ws: &WreathStructure, words: &[Vec<usize>], exec: Exec) -> Result<usize, AuditFailure> {
    const CHECK: &str = "word problem";
    let bad = exec.find_failure(words, |w| {
        (!crosscheck(ws, w)).then(|| fail(CHECK, format!("solver disagrees with the oracle on '{}'", ws.group().generators().format_word(w))))
    });
    bad.map_or(Ok(words.len()), Err)
}

/// Targeted suite: crosscheck plus prefix coherence, and every support
/// branch must be hit. Returns hits per branch.
pub fn check_targeted(ws: &WreathStructure, exec: Exec) -> Result<BTreeMap<Branch, usize>, AuditFailure> {
    const CHECK: &str = "targeted suite";
    let words = targeted_words(ws);
    let bad = exec.find_failure(&words, |w| {
        (!prefix_coherent(ws, w)).then(|| fail(CHECK, format!("trace of '{}' drifts from the oracle", ws.group().generators().format_word(w))))
    });
    if let Some(f) = bad {
        return Err(f);
    }
    let mut hits = BTreeMap::new();
    for w in &words {
        if let Some(b) = classify(ws, w) {
            *hits.entry(b).or_insert(0) += 1;
        }
    }
    for b in [Branch::SameSupport, Branch::LeftExtension, Branch::RightExtension, Branch::LeftRetraction, Branch::RightRetraction, Branch::SingleCoset] {
        if !hits.contains_key(&b) {
            return Err(fail(CHECK, format!("no word reaches the {b} branch")));
        }
    }
    Ok(hits)
}

/// Median solve time over `samples` random words of each length.
pub fn solve_timings(ws: &WreathStructure, lengths: &[usize], samples: usize, seed: u64) -> Vec<(usize, Duration)> {
    lengths
        .iter()
        .map(|&len| {
            let mut times: Vec<Duration> = random_words_of_len(ws, samples, len, seed ^ len as u64)
                .iter()
                .map(|w| {
                    let t0 = Instant::now();
                    let _ = solve(ws, w);
                    t0.elapsed()
                })
                .collect();
            times.sort();
            (len, times[times.len() / 2])
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct AuditConfig {
    pub language_depth: usize,
    pub multiplier_depth: usize,
    pub window: (i64, i64),
    /// cap on lit lamps in the window enumeration; `None` means all
    pub max_lamps: Option<usize>,
    pub random_words: usize,
    pub max_word_len: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            language_depth: 10,
            multiplier_depth: 8,
            window: (-2, 2),
            max_lamps: Some(2),
            random_words: 200,
            max_word_len: 40,
            seed: 7,
            exec: Exec::default(),
        }
    }
}

/// One line per passed check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub lines: Vec<String>,
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Lamp values used for window enumerations: every base element when the
/// base is finite, otherwise the short normal forms.
pub fn window_values(ws: &WreathStructure) -> Vec<GElem> {
    ws.group().base().elements().unwrap_or_else(|| {
        let base = ws.base();
        base.language().enumerate(2).iter().map(|w| base.evaluate(w)).collect()
    })
}

/// Run the full suite, stopping at the first failure.
pub fn verify(ws: &WreathStructure, cfg: &AuditConfig) -> Result<AuditReport, AuditFailure> {
    let mut r = AuditReport::default();
    let n = cfg.language_depth;
    let d = cfg.multiplier_depth;
    let exec = cfg.exec;

    let oracle = oracle_elements_within(ws, n);
    let c = check_language_exactness(ws, n, &oracle)?;
    r.lines.push(format!("language exactness (length <= {n}): {c} words"));
    let c = check_word_roundtrip(ws, n, exec)?;
    r.lines.push(format!("normal-form roundtrip (length <= {n}): {c} words"));
    let values = window_values(ws);
    let elems = ws.group().enumerate_elements_sparse(cfg.window, &values, cfg.max_lamps.unwrap_or(usize::MAX));
    let c = check_element_roundtrip(ws, &elems, exec)?;
    r.lines.push(format!("element roundtrip (window {}:{}): {c} elements", cfg.window.0, cfg.window.1));
    let c = check_multipliers(ws, d, exec)?;
    r.lines.push(format!("multiplier completeness (length <= {d}): {c} products"));
    let c = check_multiplier_soundness(ws, d, exec)?;
    r.lines.push(format!("multiplier soundness (length <= {d}): {c} pairs"));
    let c = check_inverse_coherence(ws, exec)?;
    r.lines.push(format!("inverse coherence: {c} generator pairs"));
    let c = check_shift_law(ws, d)?;
    r.lines.push(format!("shift-constant law (length <= {d}): {c} same-support products"));
    let words = random_words(ws, cfg.random_words, cfg.max_word_len, cfg.seed);
    let c = check_words(ws, &words, exec)?;
    r.lines.push(format!("word problem (seed {}): {c} random words", cfg.seed));
    let hits = check_targeted(ws, exec)?;
    let summary: Vec<String> = hits.iter().map(|(b, c)| format!("{b} {c}")).collect();
    r.lines.push(format!("targeted suite: {}", summary.join(", ")));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn lamplighter_small_suite() {
        let ws = fixtures::lamplighter().unwrap();
        let cfg = AuditConfig { language_depth: 8, multiplier_depth: 6, random_words: 50, ..AuditConfig::default() };
        let r = verify(&ws, &cfg).unwrap();
        assert_eq!(r.lines.len(), 9);
    }

    #[test]
    fn oracle_counts_match_language_on_short_words() {
        let ws = fixtures::z2_wr_dihedral().unwrap();
        let elems = oracle_elements_within(&ws, 6);
        // B0 C* C and B0 C C*, each bare or with one lamp in either slot
        assert_eq!(check_language_exactness(&ws, 4, &elems), Ok(6));
        assert!(check_language_exactness(&ws, 6, &elems).is_ok());
    }

    #[test]
    fn broken_multiplier_is_caught() {
        let ws = fixtures::lamplighter().unwrap();
        let mut j = ws.to_json();
        // swap R_t and R_t^-1
        let t = ws.group().generators().index("t").unwrap();
        j.multipliers.swap(t, t + 1);
        j.multipliers[t].generator = "t".into();
        j.multipliers[t + 1].generator = "t^-1".into();
        let bad = WreathStructure::from_json(&j).unwrap();
        let err = check_multipliers(&bad, 4, Exec::Sequential).unwrap_err();
        assert_eq!(err.check, "multiplier completeness");
    }

    #[test]
    fn random_words_are_seeded() {
        let ws = fixtures::lamplighter().unwrap();
        assert_eq!(random_words(&ws, 5, 10, 1), random_words(&ws, 5, 10, 1));
        assert_ne!(random_words(&ws, 5, 10, 1), random_words(&ws, 5, 10, 2));
    }
}
