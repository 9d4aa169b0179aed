//! JSON schemas for the exchange formats and conversions to and from the
//! library types.
//!
//! Coefficients in `Q(t)` travel as a pair of polynomial strings in the
//! notation of the library display (e.g. `2*t^2-1/3*t+5`); everything else
//! is plain structural JSON.

use diffalg_core::classify::{gm_var, GmRep};
use diffalg_core::laurent::{LaurentMono, LaurentPoly};
use diffalg_core::matrix::Mat;
use diffalg_core::modules::{AMat, FinModule};
use diffalg_core::quotient::{QuotElem, QuotRing};
use diffalg_core::rat::{qpoly_to_string, ratfunc_parse};
use diffalg_core::{DerivVar, DiffPoly, Monomial, RatFunc, VarGroup, VarName};
use serde::{Deserialize, Serialize};

/// Input or schema problem, reported with exit code 2.
#[derive(Debug)]
pub struct JsonError(pub String);

impl std::fmt::Display for JsonError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for JsonError {}

fn err(msg: impl Into<String>) -> JsonError {
    JsonError(msg.into())
}

#[derive(Serialize, Deserialize, Clone)]
pub struct CoeffJson {
    pub num: String,
    pub den: String,
}

pub fn ratfunc_to_json(r: &RatFunc) -> CoeffJson {
    CoeffJson {
        num: qpoly_to_string(r.num()),
        den: qpoly_to_string(r.den()),
    }
}

pub fn ratfunc_from_json(c: &CoeffJson) -> Result<RatFunc, JsonError> {
    let s = format!("({})/({})", c.num, c.den);
    ratfunc_parse(&s).ok_or_else(|| err(format!("bad coefficient {}/{}", c.num, c.den)))
}

/// One factor of a differential monomial: `[group, name, order, multiplicity]`.
#[derive(Serialize, Deserialize, Clone)]
pub struct FactorJson(pub String, pub String, pub u32, pub u32);

#[derive(Serialize, Deserialize, Clone)]
pub struct TermJson {
    pub coeff: CoeffJson,
    pub mono: Vec<FactorJson>,
}

pub type DiffPolyJson = Vec<TermJson>;

fn group_to_str(g: VarGroup) -> &'static str {
    match g {
        VarGroup::Module => "module",
        VarGroup::GroupLeft => "group-left",
        VarGroup::GroupRight => "group-right",
        VarGroup::AuxConst => "aux-const",
    }
}

fn group_from_str(s: &str) -> Result<VarGroup, JsonError> {
    match s {
        "module" => Ok(VarGroup::Module),
        "group-left" => Ok(VarGroup::GroupLeft),
        "group-right" => Ok(VarGroup::GroupRight),
        "aux-const" => Ok(VarGroup::AuxConst),
        other => Err(err(format!("unknown variable group {:?}", other))),
    }
}

pub fn diffpoly_to_json(p: &DiffPoly) -> DiffPolyJson {
    p.iter()
        .map(|(mono, coeff)| TermJson {
            coeff: ratfunc_to_json(coeff),
            mono: mono
                .factors()
                .map(|(v, &m)| {
                    FactorJson(
                        group_to_str(v.group).to_string(),
                        v.name.as_str().to_string(),
                        v.order,
                        m,
                    )
                })
                .collect(),
        })
        .collect()
}

pub fn diffpoly_from_json(terms: &DiffPolyJson) -> Result<DiffPoly, JsonError> {
    let mut acc = DiffPoly::zero();
    for t in terms {
        let coeff = ratfunc_from_json(&t.coeff)?;
        let mut factors = Vec::new();
        for FactorJson(group, name, order, mult) in &t.mono {
            if name.is_empty() || name.len() > 8 {
                return Err(err(format!("bad variable name {:?}", name)));
            }
            factors.push((
                DerivVar {
                    group: group_from_str(group)?,
                    name: VarName::new(name),
                    order: *order,
                },
                *mult,
            ));
        }
        let mono = Monomial::from_factors(factors);
        acc = acc.add(&DiffPoly::term(coeff, mono));
    }
    Ok(acc)
}

#[derive(Serialize, Deserialize, Clone)]
pub struct QuotElemJson {
    pub ring: String,
    pub rep: DiffPolyJson,
}

pub fn quotelem_to_json(e: &QuotElem) -> QuotElemJson {
    QuotElemJson {
        ring: match e.ring() {
            QuotRing::A => "A".to_string(),
            QuotRing::B => "B".to_string(),
        },
        rep: diffpoly_to_json(e.rep()),
    }
}

pub fn quotelem_from_json(e: &QuotElemJson) -> Result<QuotElem, JsonError> {
    let ring = match e.ring.as_str() {
        "A" => QuotRing::A,
        "B" => QuotRing::B,
        other => return Err(err(format!("unknown quotient ring {:?}", other))),
    };
    let rep = diffpoly_from_json(&e.rep)?;
    QuotElem::new(ring, rep).map_err(|q| err(format!("element rejected: {:?}", q)))
}

#[derive(Serialize, Deserialize, Clone)]
pub struct FinModuleJson {
    pub dim: usize,
    pub basis: Option<Vec<DiffPolyJson>>,
    pub coaction: Vec<Vec<QuotElemJson>>,
}

pub fn finmodule_to_json(m: &FinModule) -> FinModuleJson {
    FinModuleJson {
        dim: m.dim(),
        basis: m
            .basis()
            .map(|b| b.iter().map(diffpoly_to_json).collect()),
        coaction: m
            .coaction()
            .iter()
            .map(|row| row.iter().map(quotelem_to_json).collect())
            .collect(),
    }
}

pub fn finmodule_from_json(j: &FinModuleJson) -> Result<FinModule, JsonError> {
    let n = j.dim;
    if j.coaction.len() != n || j.coaction.iter().any(|r| r.len() != n) {
        return Err(err("coaction matrix shape does not match dim"));
    }
    let mut coaction: AMat = Vec::with_capacity(n);
    for row in &j.coaction {
        let mut out = Vec::with_capacity(n);
        for e in row {
            out.push(quotelem_from_json(e)?);
        }
        coaction.push(out);
    }
    match &j.basis {
        None => Ok(FinModule::new(coaction)),
        Some(b) => {
            if b.len() != n {
                return Err(err("basis length does not match dim"));
            }
            let basis = b
                .iter()
                .map(|p| diffpoly_from_json(p))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(FinModule::with_basis(basis, coaction))
        }
    }
}

/// One factor of a Laurent monomial: `[name, order, exponent]`.
#[derive(Serialize, Deserialize, Clone)]
pub struct LaurentFactorJson(pub String, pub u32, pub i64);

#[derive(Serialize, Deserialize, Clone)]
pub struct LaurentTermJson {
    pub coeff: CoeffJson,
    pub mono: Vec<LaurentFactorJson>,
}

pub type LaurentPolyJson = Vec<LaurentTermJson>;

pub fn laurent_to_json(p: &LaurentPoly) -> LaurentPolyJson {
    p.iter()
        .map(|(mono, coeff)| LaurentTermJson {
            coeff: ratfunc_to_json(coeff),
            mono: mono
                .factors()
                .map(|(&(name, order), &e)| {
                    LaurentFactorJson(name.as_str().to_string(), order, e)
                })
                .collect(),
        })
        .collect()
}

pub fn laurent_from_json(terms: &LaurentPolyJson) -> Result<LaurentPoly, JsonError> {
    let mut acc = LaurentPoly::zero();
    for t in terms {
        let coeff = ratfunc_from_json(&t.coeff)?;
        let mut factors = Vec::new();
        for LaurentFactorJson(name, order, e) in &t.mono {
            if name.is_empty() || name.len() > 8 {
                return Err(err(format!("bad variable name {:?}", name)));
            }
            if *order > 0 && *e < 0 {
                return Err(err("derivative factors cannot carry negative exponents"));
            }
            factors.push(((VarName::new(name), *order), *e));
        }
        acc = acc.add(&LaurentPoly::term(coeff, LaurentMono::from_factors(factors)));
    }
    Ok(acc)
}

#[derive(Serialize, Deserialize, Clone)]
pub struct GmRepJson {
    pub n: usize,
    pub matrix: Vec<Vec<LaurentPolyJson>>,
}

pub fn gmrep_to_json(rep: &GmRep) -> GmRepJson {
    GmRepJson {
        n: rep.n(),
        matrix: rep
            .matrix()
            .iter()
            .map(|row| row.iter().map(laurent_to_json).collect())
            .collect(),
    }
}

pub fn gmrep_from_json(j: &GmRepJson) -> Result<GmRep, JsonError> {
    if j.n < 1 || j.n > 4 {
        return Err(err("between 1 and 4 torus factors supported"));
    }
    let r = j.matrix.len();
    if j.matrix.iter().any(|row| row.len() != r) {
        return Err(err("matrix must be square"));
    }
    let mut matrix = Vec::with_capacity(r);
    for row in &j.matrix {
        let mut out = Vec::with_capacity(r);
        for p in row {
            let poly = laurent_from_json(p)?;
            for (m, _) in poly.iter() {
                for (&(name, _), _) in m.factors() {
                    if !(1..=j.n).any(|i| gm_var(i) == name) {
                        return Err(err(format!(
                            "variable {} is outside the declared torus factors",
                            name.as_str()
                        )));
                    }
                }
            }
            out.push(poly);
        }
        matrix.push(out);
    }
    Ok(GmRep::new(j.n, matrix))
}

/// Matrix over `K` as rows of coefficient pairs.
pub type MatJson = Vec<Vec<CoeffJson>>;

pub fn mat_to_json(m: &Mat) -> MatJson {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| ratfunc_to_json(m.get(i, j))).collect())
        .collect()
}

pub fn mat_from_json(j: &MatJson) -> Result<Mat, JsonError> {
    let rows = j.len();
    if rows == 0 {
        return Err(err("matrix must have at least one row"));
    }
    let cols = j[0].len();
    if j.iter().any(|r| r.len() != cols) {
        return Err(err("matrix rows must have equal length"));
    }
    let mut data: Vec<Vec<RatFunc>> = Vec::with_capacity(rows);
    for row in j {
        let mut out = Vec::with_capacity(cols);
        for c in row {
            out.push(ratfunc_from_json(c)?);
        }
        data.push(out);
    }
    Ok(Mat::from_rows(data))
}

/// Combined input for the pull-back and push-out constructions.
#[derive(Serialize, Deserialize, Clone)]
pub struct SquareInputJson {
    pub m1: FinModuleJson,
    pub m2: FinModuleJson,
    /// The shared quotient (pull-back) or shared submodule (push-out).
    pub shared: FinModuleJson,
    pub map1: MatJson,
    pub map2: MatJson,
}

/// A nilpotent array as JSON: entries keyed by factor index and derivative
/// order.
#[derive(Serialize, Deserialize, Clone)]
pub struct NilEntryJson {
    pub i: usize,
    pub j: u32,
    pub matrix: MatJson,
}

pub fn nilarray_to_json(n: &diffalg_core::actions::NilArray) -> Vec<NilEntryJson> {
    n.entries()
        .map(|(&(i, j), m)| NilEntryJson {
            i,
            j,
            matrix: mat_to_json(m),
        })
        .collect()
}

/// Stable textual rendering of a `K`-matrix for text reports.
pub fn mat_to_text(m: &Mat) -> String {
    let mut rows = Vec::new();
    for i in 0..m.rows() {
        let cells: Vec<String> = (0..m.cols()).map(|j| format!("{}", m.get(i, j))).collect();
        rows.push(format!("[{}]", cells.join(", ")));
    }
    format!("[{}]", rows.join(", "))
}
