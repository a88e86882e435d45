//! Block designs: parsing, validation, the `s`-subset versus block incidence
//! matrix `M_s`, and its Moore-Penrose inverse.
//!
//! For a 2-design the point-block matrix has the closed-form inverse
//!
//! ```text
//! M_1^+[B, u] = 1/λ_1                      if u ∈ B
//!             = -(1/λ_1) (k-1)/(v-k)       otherwise
//! ```
//!
//! which also equals `M_1^T ((λ_1-λ_2) I + λ_2 J)^{-1}` with `J` of size `v`.
//! For `s >= 2` no closed form is known and the inverse comes from the oracle;
//! [`survey_designs`] records how its entries fall into intersection classes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Rational;
use crate::combinatorics::binomial;
use crate::error::{param_err, Error, Result};
use crate::incidence::{IncidenceMatrix, Label};
use crate::linalg::{penrose_check, pseudoinverse_oracle, Matrix, PenroseReport, RatMatrix};
use crate::subsets::{colex_masks, mask_to_subset, subset_to_mask, MAX_GROUND_SET};

/// Parameters `t-(v, k, λ)` of a design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DesignParams {
    pub t: usize,
    pub v: usize,
    pub k: usize,
    pub lambda: u64,
}

/// A point count and a list of blocks, each a strictly increasing list of
/// 1-based points. Blocks may repeat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    v: usize,
    k: usize,
    blocks: Vec<Vec<usize>>,
    declared: Option<DesignParams>,
}

impl Design {
    pub fn new(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if v > MAX_GROUND_SET {
            return param_err(format!("at most {MAX_GROUND_SET} points are supported, got {v}"));
        }
        let Some(first) = blocks.first() else {
            return param_err("a design needs at least one block");
        };
        let k = first.len();
        for b in &blocks {
            if b.len() != k {
                return param_err(format!("block {b:?} has size {}, expected {k}", b.len()));
            }
            if b.windows(2).any(|w| w[0] >= w[1]) || b.iter().any(|&u| u == 0 || u > v) {
                return param_err(format!("block {b:?} is not an increasing subset of [1, {v}]"));
            }
        }
        Ok(Design { v, k, blocks, declared: None })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Parameters from the `# t v k lambda` header, if the source had one.
    pub fn declared(&self) -> Option<DesignParams> {
        self.declared
    }

    /// The design whose blocks are the complements of these blocks.
    pub fn complement(&self) -> Design {
        let blocks = self.blocks.iter().map(|b| (1..=self.v).filter(|u| !b.contains(u)).collect()).collect();
        Design { v: self.v, k: self.v - self.k, blocks, declared: None }
    }

    /// Renders the design in the block file format.
    pub fn to_file_string(&self, params: Option<&DesignParams>) -> String {
        let mut s = String::new();
        if let Some(p) = params {
            writeln!(s, "# {} {} {} {}", p.t, p.v, p.k, p.lambda).unwrap();
        }
        for b in &self.blocks {
            let pts: Vec<String> = b.iter().map(|u| u.to_string()).collect();
            writeln!(s, "{}", pts.join(" ")).unwrap();
        }
        s
    }

    fn masks(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| subset_to_mask(b)).collect()
    }
}

fn parse_header(line: &str) -> Option<DesignParams> {
    let body = line.strip_prefix('#')?;
    let nums: Vec<u64> = body.split_whitespace().map(str::parse).collect::<Result<_, _>>().ok()?;
    match nums[..] {
        [t, v, k, lambda] => Some(DesignParams { t: t as usize, v: v as usize, k: k as usize, lambda }),
        _ => None,
    }
}

/// Parses the block file format:
///
/// - an optional first line `# t v k lambda` declaring parameters,
/// - other lines starting with `#` are comments, blank lines are ignored,
/// - every other line is one block of space-separated, strictly increasing
///   1-based points.
///
/// `v` is the declared value if present, else the largest point seen.
pub fn parse_design(source: &str) -> Result<Design> {
    let mut declared = None;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut k = None;
    let mut last_line = 0;
    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if idx == 0 {
                declared = parse_header(line);
            }
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let block: Vec<usize> = line
            .split_whitespace()
            .map(|tok| tok.parse::<usize>().map_err(|_| err(format!("{tok:?} is not a point index"))))
            .collect::<Result<_>>()?;
        if block.contains(&0) {
            return Err(err("points are numbered from 1".into()));
        }
        if block.windows(2).any(|w| w[0] >= w[1]) {
            return Err(err("points in a block must be strictly increasing".into()));
        }
        if let Some(d) = declared {
            if let Some(&u) = block.iter().find(|&&u| u > d.v) {
                return Err(err(format!("point {u} outside [1, {}]", d.v)));
            }
        }
        if block.last().is_some_and(|&u| u > MAX_GROUND_SET) {
            return Err(err(format!("at most {MAX_GROUND_SET} points are supported")));
        }
        let expected = *k.get_or_insert(declared.map_or(block.len(), |d| d.k));
        if block.len() != expected {
            return Err(err(format!("block has {} points, expected {expected}", block.len())));
        }
        blocks.push(block);
    }
    if blocks.is_empty() {
        return Err(Error::Parse { line: last_line, msg: "no blocks".into() });
    }
    let v = declared.map_or_else(|| blocks.iter().flatten().copied().max().unwrap_or(0), |d| d.v);
    let mut design =
        Design::new(v, blocks).map_err(|e| Error::Parse { line: last_line, msg: e.to_string() })?;
    design.declared = declared;
    Ok(design)
}

pub fn read_design(path: &Path) -> Result<Design> {
    parse_design(&std::fs::read_to_string(path)?)
}

/// Two `t`-subsets covered by different numbers of blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub first: Vec<usize>,
    pub first_count: u64,
    pub second: Vec<usize>,
    pub second_count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Valid(DesignParams),
    Invalid(Witness),
}

/// Counts, for every `t`-subset of `[v]`, the blocks containing it.
pub fn validate_design(d: &Design, t: usize) -> Result<Validation> {
    if t == 0 || t > d.k {
        return param_err(format!("need 1 <= t <= k = {}, got t = {t}", d.k));
    }
    let blocks = d.masks();
    let count = |m: u64| blocks.iter().filter(|&&b| b & m == m).count() as u64;
    let subsets = colex_masks(d.v, t);
    let first = subsets[0];
    let lambda = count(first);
    for &m in &subsets[1..] {
        let c = count(m);
        if c != lambda {
            return Ok(Validation::Invalid(Witness {
                first: mask_to_subset(first),
                first_count: lambda,
                second: mask_to_subset(m),
                second_count: c,
            }));
        }
    }
    Ok(Validation::Valid(DesignParams { t, v: d.v, k: d.k, lambda }))
}

/// A design together with parameters it has been checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedDesign {
    design: Design,
    params: DesignParams,
}

impl ValidatedDesign {
    /// Validates at strength `t`, and against the declared header if there is one.
    pub fn new(design: Design, t: usize) -> Result<Self> {
        match validate_design(&design, t)? {
            Validation::Valid(params) => {
                if let Some(decl) = design.declared {
                    if decl.t == t && decl != params {
                        return param_err(format!(
                            "declared parameters {decl:?} but the blocks form {params:?}"
                        ));
                    }
                }
                Ok(ValidatedDesign { design, params })
            }
            Validation::Invalid(w) => param_err(format!(
                "not a {t}-design: {:?} lies in {} blocks but {:?} lies in {}",
                w.first, w.first_count, w.second, w.second_count
            )),
        }
    }

    /// Uses the declared `t` when present, else the largest `t <= k` at which the blocks form a design.
    pub fn infer(design: Design) -> Result<Self> {
        if let Some(decl) = design.declared {
            return Self::new(design, decl.t);
        }
        let t = (1..=design.k)
            .rev()
            .find(|&t| matches!(validate_design(&design, t), Ok(Validation::Valid(_))))
            .ok_or_else(|| Error::Parameter("the blocks do not form a 1-design".into()))?;
        Self::new(design, t)
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn params(&self) -> DesignParams {
        self.params
    }

    pub fn lambda_s(&self, s: usize) -> Result<Rational> {
        let p = self.params;
        lambda_s(p.t, p.v, p.k, p.lambda, s)
    }
}

/// `λ_s = λ C(v-s, t-s) / C(k-s, t-s)`, the number of blocks through any `s`-subset.
pub fn lambda_s(t: usize, v: usize, k: usize, lambda: u64, s: usize) -> Result<Rational> {
    if s > t || t > k || k > v {
        return param_err(format!("need s <= t <= k <= v, got s={s} t={t} k={k} v={v}"));
    }
    let (t, v, k, s) = (t as i64, v as i64, k as i64, s as i64);
    let value = Rational::from_integer(lambda as i64)
        * Rational::new(binomial(v - s, t - s), binomial(k - s, t - s))?;
    if !value.is_integer() {
        log::warn!("λ_{s} = {value} is not an integer: no {t}-({v},{k},{lambda}) design exists");
    }
    Ok(value)
}

/// `M_s`: `s`-subsets of `[v]` in colex order against blocks in file order.
pub fn build_design_incidence(d: &Design, s: usize) -> Result<IncidenceMatrix> {
    if s > d.k {
        return param_err(format!("need 0 <= s <= k = {}, got s = {s}", d.k));
    }
    let rows = colex_masks(d.v, s);
    let blocks = d.masks();
    Ok(IncidenceMatrix::from_relation(
        rows.iter().map(|&m| Label::Subset(mask_to_subset(m))).collect(),
        d.blocks.iter().enumerate().map(|(index, b)| Label::Block { index, points: b.clone() }).collect(),
        |i, j| rows[i] & !blocks[j] == 0,
    ))
}

/// `(x I + y J)^{-1} = a I + b J` for `n x n` matrices, as `(a, b)`.
pub fn xi_yj_inverse(x: &Rational, y: &Rational, n: usize) -> Result<(Rational, Rational)> {
    let nn = Rational::from_integer(n as i64);
    let det_factor = x * (x + &nn * y);
    if det_factor.is_zero() {
        return Err(Error::Singular(format!("{x} I + {y} J of size {n}")));
    }
    let a = x.recip().unwrap();
    let b = -(y / &det_factor);
    Ok((a, b))
}

fn require_t2(vd: &ValidatedDesign) -> Result<()> {
    let p = vd.params;
    if p.t < 2 {
        return param_err(format!("the closed form needs t >= 2, got t = {}", p.t));
    }
    if p.v == p.k {
        return Err(Error::Degenerate("every block is the whole point set (v = k)".into()));
    }
    Ok(())
}

/// The closed-form `M_1^+`, `b x v`, indexed by (block, point).
pub fn m1_mpinv_closed_form(vd: &ValidatedDesign) -> Result<RatMatrix> {
    require_t2(vd)?;
    let (v, k) = (vd.params.v as i64, vd.params.k as i64);
    let lambda1 = vd.lambda_s(1)?;
    let inside = lambda1.recip().expect("λ_1 > 0");
    let outside = -(&inside * Rational::new(k - 1, v - k)?);
    let blocks = vd.design.masks();
    Ok(Matrix::from_fn(blocks.len(), vd.params.v, |b, u| {
        if blocks[b] >> u & 1 == 1 {
            inside.clone()
        } else {
            outside.clone()
        }
    }))
}

/// `M_1^T ((λ_1-λ_2) I + λ_2 J)^{-1}`, the same matrix as [`m1_mpinv_closed_form`]
/// assembled from the Gram identity instead of the final entry formula.
pub fn m1_mpinv_via_gram(vd: &ValidatedDesign) -> Result<RatMatrix> {
    require_t2(vd)?;
    let (l1, l2) = (vd.lambda_s(1)?, vd.lambda_s(2)?);
    let v = vd.params.v;
    let (a, b) = xi_yj_inverse(&(&l1 - &l2), &l2, v)?;
    let blocks = vd.design.masks();
    // Row B of M_1^T (aI + bJ) is a·[u ∈ B] + b·k.
    let bk = &b * Rational::from_integer(vd.params.k as i64);
    let inside = &a + &bk;
    Ok(Matrix::from_fn(
        blocks.len(),
        v,
        |blk, u| {
            if blocks[blk] >> u & 1 == 1 {
                inside.clone()
            } else {
                bk.clone()
            }
        },
    ))
}

/// `M_s^+` from the exact oracle, `b x C(v,s)`.
pub fn ms_mpinv_oracle(d: &Design, s: usize) -> Result<RatMatrix> {
    Ok(pseudoinverse_oracle(&build_design_incidence(d, s)?.to_rational()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Agree,
    Disagree,
}

/// Entries of one design's `M_s^+`, grouped by `|R ∩ B|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DesignSurvey {
    pub id: String,
    pub classes: BTreeMap<usize, BTreeSet<Rational>>,
    /// Every class holds a single value.
    pub constant: bool,
    pub penrose: PenroseReport,
}

/// An entry that differs from the most common value of its class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyException {
    pub design: String,
    pub block: usize,
    pub subset: Vec<usize>,
    pub intersection: usize,
    pub entry: Rational,
    pub class_mode: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyReport {
    pub s: usize,
    pub parameters: DesignParams,
    pub designs: Vec<DesignSurvey>,
    pub cross_design: BTreeMap<usize, Verdict>,
    pub exceptions: Vec<SurveyException>,
}

fn survey_one(id: &str, d: &Design, s: usize) -> Result<(DesignSurvey, Vec<SurveyException>)> {
    let m = build_design_incidence(d, s)?.to_rational();
    let pinv = pseudoinverse_oracle(&m);
    let penrose = penrose_check(&m, &pinv)?;
    let rows = colex_masks(d.v, s);
    let blocks = d.masks();

    let mut tallies: BTreeMap<usize, BTreeMap<Rational, usize>> = BTreeMap::new();
    for (b, &bm) in blocks.iter().enumerate() {
        for (ri, &rm) in rows.iter().enumerate() {
            let i = (bm & rm).count_ones() as usize;
            *tallies.entry(i).or_default().entry(pinv.get(b, ri).clone()).or_default() += 1;
        }
    }
    // Most frequent value per class; ties go to the smallest value.
    let modes: BTreeMap<usize, Rational> = tallies
        .iter()
        .map(|(&i, t)| {
            let best = t.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).unwrap();
            (i, best.0.clone())
        })
        .collect();
    let mut exceptions = Vec::new();
    for (b, &bm) in blocks.iter().enumerate() {
        for (ri, &rm) in rows.iter().enumerate() {
            let i = (bm & rm).count_ones() as usize;
            let entry = pinv.get(b, ri);
            if *entry != modes[&i] {
                exceptions.push(SurveyException {
                    design: id.to_string(),
                    block: b,
                    subset: mask_to_subset(rm),
                    intersection: i,
                    entry: entry.clone(),
                    class_mode: modes[&i].clone(),
                });
            }
        }
    }
    let classes: BTreeMap<usize, BTreeSet<Rational>> =
        tallies.into_iter().map(|(i, t)| (i, t.into_keys().collect())).collect();
    let constant = classes.values().all(|v| v.len() == 1);
    Ok((DesignSurvey { id: id.to_string(), classes, constant, penrose }, exceptions))
}

/// Computes `M_s^+` for every design and reports how its entries depend on
/// `|R ∩ B|`, within each design and across designs. Designs are processed in
/// parallel; the report keeps input order.
pub fn survey_designs(designs: &[(String, ValidatedDesign)], s: usize) -> Result<SurveyReport> {
    let Some((_, first)) = designs.first() else {
        return param_err("no designs to survey");
    };
    let parameters = first.params;
    if let Some((id, _)) = designs.iter().find(|(_, d)| d.params != parameters) {
        return param_err(format!("design {id} does not share parameters {parameters:?}"));
    }
    let results: Vec<(DesignSurvey, Vec<SurveyException>)> =
        designs.par_iter().map(|(id, d)| survey_one(id, &d.design, s)).collect::<Result<_>>()?;

    let all_classes: BTreeSet<usize> = results.iter().flat_map(|(d, _)| d.classes.keys().copied()).collect();
    let cross_design = all_classes
        .into_iter()
        .map(|i| {
            let first = results[0].0.classes.get(&i);
            let agree = results.iter().all(|(d, _)| d.classes.get(&i) == first);
            (i, if agree { Verdict::Agree } else { Verdict::Disagree })
        })
        .collect();
    let (designs, exceptions): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok(SurveyReport {
        s,
        parameters,
        designs,
        cross_design,
        exceptions: exceptions.into_iter().flatten().collect(),
    })
}
