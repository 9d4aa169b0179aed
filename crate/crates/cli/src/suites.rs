//! Named verification suites run by `diffalg verify`.
//!
//! Each suite produces a machine-readable report: one line per assertion
//! with a stable anchor string, a pass/fail status and a human-readable
//! detail. Randomized suites are deterministic given the seed.

use serde::Serialize;

use diffalg_core::actions::{gm_evaluate, lemma_max_witness};
use diffalg_core::modules::{
    check_comodule, coaction_matrix, construct_pdk, construct_ud, construct_wd, direct_sum, dual,
    invariants, iso_test, prolongation, socle, split_test, three_layer_example, FinModule,
    SubmoduleDescr,
};
use diffalg_core::quotient::{quot_equal, QuotElem, QuotRing};
use diffalg_core::rng::SplitMix64;
use diffalg_core::var::names;
use diffalg_core::{DerivVar, DiffPoly, Monomial, RatFunc, Term, VarGroup};

#[derive(Serialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Note,
}

#[derive(Serialize, Clone)]
pub struct ReportLine {
    pub anchor: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Serialize, Clone)]
pub struct Report {
    pub suite: String,
    pub passed: bool,
    pub lines: Vec<ReportLine>,
}

impl Report {
    fn new(suite: &str) -> Self {
        Report {
            suite: suite.to_string(),
            passed: true,
            lines: Vec::new(),
        }
    }

    fn check(&mut self, anchor: &str, ok: bool, detail: String) {
        if !ok {
            self.passed = false;
        }
        self.lines.push(ReportLine {
            anchor: anchor.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        });
    }

    fn note(&mut self, anchor: &str, detail: String) {
        self.lines.push(ReportLine {
            anchor: anchor.to_string(),
            status: Status::Note,
            detail,
        });
    }
}

pub const SUITES: &[&str] = &[
    "worked-examples",
    "max-witness",
    "free-realization",
    "comodule",
    "socle",
    "iso-table",
    "counterexample",
];

pub fn run_suite(name: &str, trials: u32, seed: u64, fallback: bool) -> Option<Report> {
    match name {
        "worked-examples" => Some(worked_examples(fallback)),
        "max-witness" => Some(max_witness(trials, seed)),
        "free-realization" => Some(free_realization(trials, seed)),
        "comodule" => Some(comodule()),
        "socle" => Some(socle_suite()),
        "iso-table" => Some(iso_table()),
        "counterexample" => Some(counterexample()),
        _ => None,
    }
}

fn xv(o: u32) -> DiffPoly {
    DiffPoly::var(names::x(o))
}

fn yv(o: u32) -> DiffPoly {
    DiffPoly::var(names::y(o))
}

fn cv(i: usize, j: usize, o: u32) -> DiffPoly {
    DiffPoly::var(names::c(i, j, o))
}

fn elem_a(p: DiffPoly) -> QuotElem {
    QuotElem::new(QuotRing::A, p).expect("example stays within the order cap")
}

fn unit(n: usize, i: usize) -> Vec<RatFunc> {
    let mut v = vec![RatFunc::zero(); n];
    v[i] = RatFunc::one();
    v
}

/// The degree-2 coaction example: basis `{x^2, xy, y^2, x'y - xy'}`.
fn worked_examples(fallback: bool) -> Report {
    let mut rep = Report::new("worked-examples");
    let w = xv(1).mul(&yv(0)).sub(&xv(0).mul(&yv(1)));
    let basis = [
        xv(0).pow(2),
        xv(0).mul(&yv(0)),
        yv(0).pow(2),
        w,
    ];
    let m = match coaction_matrix(&basis) {
        Ok(m) => m,
        Err(e) => {
            rep.check(
                "deg2/coaction",
                false,
                format!("coaction matrix construction failed: {:?}", e),
            );
            return rep;
        }
    };
    rep.check(
        "deg2/coaction",
        true,
        "span {x^2, xy, y^2, x'y - xy'} is coaction-stable".to_string(),
    );
    let first_row = [
        cv(1, 1, 0).pow(2),
        cv(1, 1, 0).mul(&cv(1, 2, 0)),
        cv(1, 2, 0).pow(2),
        cv(1, 1, 1).mul(&cv(1, 2, 0)).sub(&cv(1, 1, 0).mul(&cv(1, 2, 1))),
    ];
    for (j, want) in first_row.iter().enumerate() {
        let ok = quot_equal(m.entry(0, j), &elem_a(want.clone()));
        rep.check(
            "deg2/first-row",
            ok,
            format!("entry (0,{}) equals {}", j, want),
        );
    }
    // coefficient of xy in the image of the wronskian element
    let target = cv(1, 1, 1)
        .mul(&cv(2, 2, 0))
        .sub(&cv(1, 2, 1).mul(&cv(2, 1, 0)))
        .scale(&RatFunc::from_int(2));
    let target = elem_a(target);
    let ok = quot_equal(m.entry(1, 3), &target);
    rep.check(
        "deg2/xy-coefficient",
        ok,
        "entry (1,3) equals 2*(c11'*c22 - c12'*c21) in A".to_string(),
    );
    if fallback {
        let r = diffalg_core::quotient::quot_equal_with_fallback(m.entry(1, 3), &target);
        rep.check(
            "deg2/xy-coefficient-fallback",
            r.agree() && r.groebner,
            "pseudo-reduction and truncated Groebner membership agree".to_string(),
        );
    }
    // the y^2 coefficients produced by the substitution homomorphism
    let ok = quot_equal(m.entry(2, 0), &elem_a(cv(2, 1, 0).pow(2)));
    rep.check(
        "deg2/x2-third-coefficient",
        ok,
        "image of x^2 carries y^2 (x) c21^2".to_string(),
    );
    rep.note(
        "deg2/x2-third-coefficient",
        "recorded variant: an alternative published display shows c22^2 here; \
         the substitution homomorphism gives c21^2"
            .to_string(),
    );
    let ok = quot_equal(m.entry(2, 1), &elem_a(cv(2, 1, 0).mul(&cv(2, 2, 0))));
    rep.check(
        "deg2/xy-third-coefficient",
        ok,
        "image of xy carries y^2 (x) c21*c22".to_string(),
    );
    rep.note(
        "deg2/xy-third-coefficient",
        "recorded variant: an alternative published display shows c11*c21 here; \
         the substitution homomorphism gives c21*c22"
            .to_string(),
    );
    let ok = check_comodule(&m).is_ok();
    rep.check("deg2/comodule", ok, "comodule axioms hold".to_string());
    rep
}

/// A random module term with positive weight: degree at most `max_deg`,
/// weight between 1 and `max_wt`, small non-zero rational coefficient.
pub fn random_positive_weight_term(
    rng: &mut SplitMix64,
    max_deg: u32,
    max_wt: u32,
) -> Term {
    loop {
        let deg = rng.int_in(1, max_deg as i64) as u32;
        let mut factors: Vec<(DerivVar, u32)> = Vec::new();
        let mut weight_left = max_wt;
        for _ in 0..deg {
            let var = if rng.int_in(0, 1) == 0 { "x" } else { "y" };
            let order = rng.int_in(0, weight_left.min(3) as i64) as u32;
            weight_left -= order;
            factors.push((DerivVar::new(VarGroup::Module, var, order), 1));
        }
        if factors.iter().all(|(v, _)| v.order == 0) {
            continue;
        }
        let num = rng.int_in(-5, 5);
        if num == 0 {
            continue;
        }
        let den = rng.int_in(1, 4);
        let coeff = RatFunc::from_int(num).mul(&RatFunc::from_int(den).inv());
        let mut mono = Monomial::one();
        for (v, m) in factors {
            mono = mono.mul(&Monomial::from_factors([(v, m)]));
        }
        return Term::new(coeff, mono);
    }
}

/// Net `x`-minus-`y` count of a module monomial.
fn torus_degree(m: &Monomial) -> i64 {
    let mut d = 0i64;
    for (v, &mult) in m.factors() {
        if v.group == VarGroup::Module {
            if v.name.as_str() == "x" {
                d += mult as i64;
            } else if v.name.as_str() == "y" {
                d -= mult as i64;
            }
        }
    }
    d
}

fn t_power(d: i64) -> RatFunc {
    let base = if d >= 0 {
        RatFunc::t()
    } else {
        RatFunc::t().inv()
    };
    let mut acc = RatFunc::one();
    for _ in 0..d.unsigned_abs() {
        acc = acc.mul(&base);
    }
    acc
}

/// Property suite: for a random positive-weight term `h` and `a = t`, the
/// residual `gm_evaluate(h, a) - a^{d(h)} h` drops the weight by exactly
/// one and its maximal term is the constructed witness.
fn max_witness(trials: u32, seed: u64) -> Report {
    let mut rep = Report::new("max-witness");
    let a = RatFunc::t();
    let mut failures = 0u32;
    for k in 0..trials {
        let mut rng = SplitMix64::new(seed ^ (k as u64).wrapping_mul(0x9e37));
        let h = random_positive_weight_term(&mut rng, 4, 5);
        let hpoly = DiffPoly::term(h.coeff.clone(), h.mono.clone());
        let w = hpoly.weight().expect("module term");
        match lemma_max_witness(&h, &a) {
            Ok(wit) => {
                let wr = wit.residual.weight().expect("module polynomial");
                if wr + 1 != w {
                    failures += 1;
                    rep.check(
                        "max-witness/weight-drop",
                        false,
                        format!("trial {}: weight {} -> {} for {}", k, w, wr, hpoly),
                    );
                }
            }
            Err(e) => {
                failures += 1;
                rep.check(
                    "max-witness/weight-drop",
                    false,
                    format!("trial {}: witness construction failed: {:?}", k, e),
                );
            }
        }
    }
    rep.check(
        "max-witness/weight-drop",
        failures == 0,
        format!(
            "{} of {} trials dropped the weight by exactly one with a maximal witness",
            trials - failures,
            trials
        ),
    );
    rep
}

/// Property suite: a torus-stable span containing weight `w > 0` contains
/// weight `w - 1`, realized as `gm_evaluate(f_d, t) - t^d f_d`.
fn free_realization(trials: u32, seed: u64) -> Report {
    let mut rep = Report::new("free-realization");
    let mut failures = 0u32;
    for k in 0..trials {
        let mut rng = SplitMix64::new(seed ^ (k as u64).wrapping_mul(0x51f7));
        // random sum of terms; keep the slice of maximal-weight torus degree
        let nterms = rng.int_in(1, 4);
        let mut f = DiffPoly::zero();
        for _ in 0..nterms {
            let h = random_positive_weight_term(&mut rng, 4, 5);
            f = f.add(&DiffPoly::term(h.coeff, h.mono));
        }
        if f.is_zero() {
            continue;
        }
        let w = f.weight().expect("module polynomial");
        if w == 0 {
            continue;
        }
        // torus degree of some maximal-weight term
        let d = f
            .iter()
            .filter(|(m, _)| {
                DiffPoly::term(RatFunc::one(), (*m).clone())
                    .weight()
                    .unwrap()
                    == w
            })
            .map(|(m, _)| torus_degree(m))
            .next()
            .expect("a maximal-weight term exists");
        let f_d = DiffPoly::from_terms(
            f.iter()
                .filter(|(m, _)| torus_degree(m) == d)
                .map(|(m, c)| (m.clone(), c.clone())),
        );
        let wd = f_d.weight().expect("module polynomial");
        if wd == 0 {
            continue;
        }
        let twisted = gm_evaluate(&f_d, &RatFunc::t()).expect("module polynomial");
        let residual = twisted.sub(&f_d.scale(&t_power(d)));
        let ok = !residual.is_zero()
            && residual.weight().expect("module polynomial") + 1 == wd;
        if !ok {
            failures += 1;
            rep.check(
                "free-realization/weight-descent",
                false,
                format!("trial {}: descent failed for {}", k, f_d),
            );
        }
    }
    rep.check(
        "free-realization/weight-descent",
        failures == 0,
        format!(
            "weight descended by exactly one in every effective trial of {}",
            trials
        ),
    );
    rep
}

fn comodule() -> Report {
    let mut rep = Report::new("comodule");
    let mut run = |name: &str, m: &FinModule| {
        let r = check_comodule(m);
        let ok = r.is_ok();
        let detail = match r {
            Ok(()) => format!("{} (dim {}) satisfies the comodule axioms", name, m.dim()),
            Err(e) => format!("{} fails at {:?}", name, e),
        };
        rep.check("comodule/axioms", ok, detail);
    };
    for d in 1..=3u32 {
        run(&format!("P_{}^0", d), &construct_pdk(d, 0));
    }
    run("P_1^1", &construct_pdk(1, 1));
    for d in 1..=2u32 {
        run(&format!("U_{}", d), &construct_ud(d).unwrap());
    }
    run("W_2", &construct_wd(2).unwrap());
    run("F(P_1^0)", &prolongation(&construct_pdk(1, 0)));
    run("dual(W_2)", &dual(&construct_wd(2).unwrap()));
    run("three-layer example", &three_layer_example());
    rep
}

fn leading_coords(n: usize, k: usize) -> SubmoduleDescr {
    SubmoduleDescr::new(n, (0..k).map(|i| unit(n, i)).collect())
}

fn socle_suite() -> Report {
    let mut rep = Report::new("socle");
    for d in 1..=3u32 {
        let u = construct_ud(d).unwrap();
        let s = socle(&u);
        let ok = s == leading_coords(u.dim(), (d + 1) as usize);
        rep.check(
            "socle/ud",
            ok,
            format!("socle(U_{}) is the leading {}-dimensional block", d, d + 1),
        );
    }
    for d in 2..=3u32 {
        let w = construct_wd(d).unwrap();
        let s = socle(&w);
        let ok = s == leading_coords(w.dim(), (d + 1) as usize);
        rep.check(
            "socle/wd",
            ok,
            format!("socle(W_{}) is the leading {}-dimensional block", d, d + 1),
        );
    }
    let p = construct_pdk(1, 0);
    let ds = direct_sum(&p, &p);
    let ok = socle(&ds).dim() == 4;
    rep.check(
        "socle/semisimple",
        ok,
        "socle of a semisimple sum is everything".to_string(),
    );
    rep
}

fn iso_table() -> Report {
    let mut rep = Report::new("iso-table");
    for d in 1..=2u32 {
        let u = construct_ud(d).unwrap();
        let ok = iso_test(&u, &dual(&u)).is_some();
        rep.check("iso/ud-self-dual", ok, format!("U_{} is self-dual", d));
        let f = prolongation(&construct_pdk(d, 0));
        let ok = iso_test(&u, &f).is_some();
        rep.check(
            "iso/ud-prolongation",
            ok,
            format!("U_{} matches the prolongation of P_{}^0", d, d),
        );
    }
    for d in 2..=3u32 {
        let w = construct_wd(d).unwrap();
        let ok = iso_test(&w, &dual(&w)).is_none();
        rep.check(
            "iso/wd-not-self-dual",
            ok,
            format!("W_{} is not isomorphic to its dual", d),
        );
    }
    let u2 = construct_ud(2).unwrap();
    let w3 = construct_wd(3).unwrap();
    let ok = iso_test(&u2, &w3).is_none();
    rep.check(
        "iso/cross-family",
        ok,
        "U_2 and W_3 (both dim 6) are not isomorphic".to_string(),
    );
    let u1 = construct_ud(1).unwrap();
    let w2 = construct_wd(2).unwrap();
    let ok = iso_test(&u1, &w2).is_none();
    rep.check(
        "iso/cross-family",
        ok,
        "U_1 and W_2 (both dim 4) are not isomorphic".to_string(),
    );
    rep
}

fn counterexample() -> Report {
    let mut rep = Report::new("counterexample");
    let m = three_layer_example();
    let ok = check_comodule(&m).is_ok();
    rep.check(
        "three-layer/comodule",
        ok,
        "the 5-dimensional example satisfies the comodule axioms".to_string(),
    );
    let inv = invariants(&m);
    let ok = inv.dim() == 1 && inv.contains(&unit(5, 0));
    rep.check(
        "three-layer/invariants",
        ok,
        "invariants are exactly the leading line".to_string(),
    );
    let trivial_sub = SubmoduleDescr::new(5, vec![unit(5, 0)]);
    let ok = matches!(split_test(&m, &trivial_sub), Ok(None));
    rep.check(
        "three-layer/no-split",
        ok,
        "the invariant line does not split off".to_string(),
    );
    let w2 = construct_wd(2).unwrap();
    let soc = socle(&w2);
    let ok = matches!(split_test(&w2, &soc), Ok(None));
    rep.check(
        "three-layer/w2-no-split",
        ok,
        "the degree-2 block of W_2 does not split off".to_string(),
    );
    rep
}
