//! Template scoring against an answer key.
//!
//! Objects of each type are aligned one-to-one, slot fills are compared
//! pairwise, and counts are turned into error and recall/precision rates.
//! Rates are exact rationals; rounding happens only when printing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::ops::{Add, AddAssign};

use num_rational::Ratio;

use crate::template::{Object, Value, TEMPLATE};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ScoreCounts {
    pub cor: u64,
    pub par: u64,
    pub inc: u64,
    pub mis: u64,
    pub spu: u64,
}

impl ScoreCounts {
    pub fn new(cor: u64, par: u64, inc: u64, mis: u64, spu: u64) -> Self {
        ScoreCounts { cor, par, inc, mis, spu }
    }

    pub fn possible(&self) -> u64 {
        self.cor + self.par + self.inc + self.mis
    }

    pub fn actual(&self) -> u64 {
        self.cor + self.par + self.inc + self.spu
    }

    pub fn metrics(&self) -> Metrics {
        compute_metrics(self)
    }
}

impl Add for ScoreCounts {
    type Output = ScoreCounts;
    fn add(self, o: ScoreCounts) -> ScoreCounts {
        ScoreCounts::new(
            self.cor + o.cor,
            self.par + o.par,
            self.inc + o.inc,
            self.mis + o.mis,
            self.spu + o.spu,
        )
    }
}

impl AddAssign for ScoreCounts {
    fn add_assign(&mut self, o: ScoreCounts) {
        *self = *self + o;
    }
}

impl std::iter::Sum for ScoreCounts {
    fn sum<I: Iterator<Item = ScoreCounts>>(iter: I) -> Self {
        iter.fold(ScoreCounts::default(), Add::add)
    }
}

/// One rate. A zero denominator yields zero with `defined` cleared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rate {
    pub value: Ratio<u64>,
    pub defined: bool,
}

impl Rate {
    fn of(num: u64, den: u64) -> Self {
        if den == 0 {
            Rate {
                value: Ratio::from_integer(0),
                defined: false,
            }
        } else {
            Rate {
                value: Ratio::new(num, den),
                defined: true,
            }
        }
    }

    /// Percentage in tenths, rounded half up.
    pub fn tenths_of_percent(&self) -> u64 {
        let scaled = self.value * Ratio::from_integer(1000u64);
        (scaled + Ratio::new(1, 2)).to_integer()
    }

    pub fn percent(&self) -> String {
        let t = self.tenths_of_percent();
        format!("{}.{}", t / 10, t % 10)
    }

    pub fn to_f64(&self) -> f64 {
        *self.value.numer() as f64 / *self.value.denom() as f64
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.percent())?;
        if !self.defined {
            f.write_str("*")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    pub err: Rate,
    pub und: Rate,
    pub ovg: Rate,
    pub sub: Rate,
    pub rec: Rate,
    pub pre: Rate,
    pub pr: Rate,
}

impl Metrics {
    pub fn all(&self) -> [(&'static str, Rate); 7] {
        [
            ("ERR", self.err),
            ("UND", self.und),
            ("OVG", self.ovg),
            ("SUB", self.sub),
            ("REC", self.rec),
            ("PRE", self.pre),
            ("P&R", self.pr),
        ]
    }
}

/// Partial matches count half. Numerators and denominators are doubled to
/// stay integral.
pub fn compute_metrics(c: &ScoreCounts) -> Metrics {
    let credit = 2 * c.cor + c.par;
    let rec = Rate::of(credit, 2 * c.possible());
    let pre = Rate::of(credit, 2 * c.actual());
    Metrics {
        err: Rate::of(2 * (c.inc + c.mis + c.spu) + c.par, 2 * (c.cor + c.par + c.inc + c.mis + c.spu)),
        und: Rate::of(c.mis, c.possible()),
        ovg: Rate::of(c.spu, c.actual()),
        sub: Rate::of(2 * c.inc + c.par, 2 * (c.cor + c.par + c.inc)),
        rec,
        pre,
        pr: recall_precision(rec, pre),
    }
}

/// Even-weighted combination `2RP / (R + P)`.
pub fn recall_precision(rec: Rate, pre: Rate) -> Rate {
    let sum = rec.value + pre.value;
    if sum == Ratio::from_integer(0) {
        return Rate {
            value: sum,
            defined: false,
        };
    }
    // reduce before multiplying to keep the intermediate values small
    let (r, p) = (rec.value, pre.value);
    let scale = Ratio::from_integer(2u64) / sum;
    Rate {
        value: scale * r * p,
        defined: rec.defined && pre.defined,
    }
}

fn normalize(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub type Aligned = BTreeMap<(String, usize), usize>;

fn value_eq(k: &Value, r: &Value, aligned: &Aligned) -> bool {
    match (k, r) {
        (Value::Str(a), Value::Str(b)) => normalize(a) == normalize(b),
        (Value::Sym(a), Value::Sym(b)) => a == b,
        (Value::Ref { kind: ka, n: na }, Value::Ref { kind: kb, n: nb }) => {
            ka == kb && aligned.get(&(ka.clone(), *na)) == Some(nb)
        }
        _ => false,
    }
}

fn value_partial(k: &Value, r: &Value) -> bool {
    match (k, r) {
        (Value::Str(a), Value::Str(b)) => {
            let (a, b) = (normalize(a), normalize(b));
            !a.is_empty() && !b.is_empty() && (a.contains(&b) || b.contains(&a))
        }
        _ => false,
    }
}

/// Compares the fills of one slot.
pub fn compare_fills(key: &[Value], response: &[Value], aligned: &Aligned) -> ScoreCounts {
    let mut k_left: Vec<&Value> = key.iter().collect();
    let mut r_left: Vec<&Value> = response.iter().collect();
    let mut counts = ScoreCounts::default();

    for cor in [true, false] {
        let mut i = 0;
        while i < k_left.len() {
            let hit = r_left.iter().position(|r| {
                if cor {
                    value_eq(k_left[i], r, aligned)
                } else {
                    value_partial(k_left[i], r)
                }
            });
            match hit {
                Some(j) => {
                    k_left.remove(i);
                    r_left.remove(j);
                    if cor {
                        counts.cor += 1;
                    } else {
                        counts.par += 1;
                    }
                }
                None => i += 1,
            }
        }
    }
    let paired = k_left.len().min(r_left.len()) as u64;
    counts.inc += paired;
    counts.mis += k_left.len() as u64 - paired;
    counts.spu += r_left.len() as u64 - paired;
    counts
}

/// Slot-by-slot counts of one key object against one response object.
pub fn compare_objects(key: &Object, response: &Object, aligned: &Aligned) -> BTreeMap<String, ScoreCounts> {
    let slots: BTreeSet<&str> = key
        .slots
        .iter()
        .chain(&response.slots)
        .map(|(s, _)| s.as_str())
        .collect();
    slots
        .into_iter()
        .map(|s| (s.to_string(), compare_fills(key.values(s), response.values(s), aligned)))
        .collect()
}

fn fills(o: &Object) -> u64 {
    o.slots.iter().map(|(_, v)| v.len() as u64).sum()
}

/// Object types ordered so that referenced types come before referencing
/// ones. Types in a reference cycle keep name order.
pub fn kind_order(key: &[Object], response: &[Object]) -> Vec<String> {
    let mut deps: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for o in key.iter().chain(response) {
        if o.kind == TEMPLATE {
            continue;
        }
        let entry = deps.entry(o.kind.clone()).or_default();
        for (_, values) in &o.slots {
            for v in values {
                if let Value::Ref { kind, .. } = v {
                    if *kind != o.kind {
                        entry.insert(kind.clone());
                    }
                }
            }
        }
    }
    let mut order = Vec::new();
    let mut done: BTreeSet<String> = BTreeSet::new();
    while done.len() < deps.len() {
        let ready: Vec<String> = deps
            .iter()
            .filter(|(k, d)| !done.contains(*k) && d.iter().all(|x| done.contains(x) || !deps.contains_key(x)))
            .map(|(k, _)| k.clone())
            .collect();
        let batch = if ready.is_empty() {
            vec![deps.keys().find(|k| !done.contains(*k)).unwrap().clone()]
        } else {
            ready
        };
        for k in batch {
            done.insert(k.clone());
            order.push(k);
        }
    }
    order
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocumentScore {
    pub counts: ScoreCounts,
    /// `(type, key n, response n)` for every aligned pair.
    pub pairs: Vec<(String, usize, usize)>,
    /// Counts per `TYPE.SLOT`.
    pub slots: BTreeMap<String, ScoreCounts>,
}

/// Pairs objects of one type given earlier alignments. Pairs with more
/// correct fills are taken first, then those with more partial fills, then
/// lower key and lower response numbers. Pairs sharing no correct or partial
/// fill stay unaligned.
pub fn align_greedy(keys: &[&Object], responses: &[&Object], aligned: &Aligned) -> Vec<(usize, usize)> {
    let mut cands = Vec::new();
    for (i, k) in keys.iter().enumerate() {
        for (j, r) in responses.iter().enumerate() {
            let c: ScoreCounts = compare_objects(k, r, aligned).into_values().sum();
            if c.cor + c.par > 0 {
                cands.push((c.cor, c.par, k.n, r.n, i, j));
            }
        }
    }
    cands.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)).then(a.3.cmp(&b.3)));
    let mut used_k = BTreeSet::new();
    let mut used_r = BTreeSet::new();
    let mut out = Vec::new();
    for (_, _, _, _, i, j) in cands {
        if used_k.contains(&i) || used_r.contains(&j) {
            continue;
        }
        used_k.insert(i);
        used_r.insert(j);
        out.push((i, j));
    }
    out
}

/// Scores one document with a caller-supplied per-type aligner.
pub fn score_with<F>(key: &[Object], response: &[Object], mut align: F) -> DocumentScore
where
    F: FnMut(&[&Object], &[&Object], &Aligned) -> Vec<(usize, usize)>,
{
    let mut aligned: Aligned = BTreeMap::new();
    let mut score = DocumentScore::default();
    for kind in kind_order(key, response) {
        let ks: Vec<&Object> = key.iter().filter(|o| o.kind == kind).collect();
        let rs: Vec<&Object> = response.iter().filter(|o| o.kind == kind).collect();
        let pairs = align(&ks, &rs, &aligned);
        let mut k_used = vec![false; ks.len()];
        let mut r_used = vec![false; rs.len()];
        for &(i, j) in &pairs {
            k_used[i] = true;
            r_used[j] = true;
            aligned.insert((kind.clone(), ks[i].n), rs[j].n);
            score.pairs.push((kind.clone(), ks[i].n, rs[j].n));
        }
        for &(i, j) in &pairs {
            for (slot, c) in compare_objects(ks[i], rs[j], &aligned) {
                *score.slots.entry(format!("{kind}.{slot}")).or_default() += c;
                score.counts += c;
            }
        }
        for (o, _) in ks.iter().zip(&k_used).filter(|(_, u)| !**u) {
            for (slot, v) in &o.slots {
                let c = ScoreCounts::new(0, 0, 0, v.len() as u64, 0);
                *score.slots.entry(format!("{kind}.{slot}")).or_default() += c;
            }
            score.counts.mis += fills(o);
        }
        for (o, _) in rs.iter().zip(&r_used).filter(|(_, u)| !**u) {
            for (slot, v) in &o.slots {
                let c = ScoreCounts::new(0, 0, 0, 0, v.len() as u64);
                *score.slots.entry(format!("{kind}.{slot}")).or_default() += c;
            }
            score.counts.spu += fills(o);
        }
    }
    score
}

pub fn score_document(key: &[Object], response: &[Object]) -> DocumentScore {
    score_with(key, response, align_greedy)
}

/// Aligned object pairs and per-slot counts of one document.
pub fn format_alignment(doc: &str, score: &DocumentScore) -> String {
    let mut out = format!("{doc}\n");
    for (kind, k, r) in &score.pairs {
        let _ = writeln!(out, "  key <{kind}-{k}> = response <{kind}-{r}>");
    }
    for (slot, c) in &score.slots {
        let _ = writeln!(
            out,
            "  {slot:<24} COR {} PAR {} INC {} MIS {} SPU {}",
            c.cor, c.par, c.inc, c.mis, c.spu
        );
    }
    out
}

/// Per-document rows followed by a TOTAL row over pooled counts.
pub fn format_report(rows: &[(String, ScoreCounts)]) -> String {
    let mut out = String::new();
    let width = rows.iter().map(|(d, _)| d.chars().count()).max().unwrap_or(0).max(5);
    let _ = write!(out, "{:<width$}", "DOC");
    for h in ["COR", "PAR", "INC", "MIS", "SPU"] {
        let _ = write!(out, " {h:>5}");
    }
    for (h, _) in ScoreCounts::default().metrics().all() {
        let _ = write!(out, " {h:>6}");
    }
    out.push('\n');
    let total: ScoreCounts = rows.iter().map(|(_, c)| *c).sum();
    for (doc, c) in rows.iter().chain(std::iter::once(&("TOTAL".to_string(), total))) {
        let _ = write!(out, "{doc:<width$}");
        for v in [c.cor, c.par, c.inc, c.mis, c.spu] {
            let _ = write!(out, " {v:>5}");
        }
        for (_, r) in c.metrics().all() {
            let _ = write!(out, " {:>6}", r.to_string());
        }
        out.push('\n');
    }
    out
}
