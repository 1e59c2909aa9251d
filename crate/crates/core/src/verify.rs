//! Named invariant suites over sampled or exhaustive group elements.
//!
//! Each check counts how many instances pass. When the group has at most
//! `samples` elements the element checks are exhaustive; pair checks are
//! exhaustive when |G|² ≤ `samples`.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::{CircleModel, SplitModel};
use crate::cyc_matrix::CycMatrix;
use crate::cyclotomic::{psi, quad_psi_sum_brute_with_limit, quad_psi_sum_closed, rho, CycNumber, QuadraticForm};
use crate::error::{Error, Result};
use crate::factorize::{factor, verify_factorization};
use crate::field::GaloisField;
use crate::linalg::{vec_neg, FqMatrix};
use crate::matrix_rep::{
    e0, eta_closed, eta_det, eta_w_stable, flat_block, induced_on_wstar, j_matrix, matrix_unit, s_matrix,
    sigma_sign, special_identities, t_matrix, to_matrix, weil_values, LagrangianFrame,
};
use crate::par::Exec;
use crate::symplectic::{GroupElement, SympSpace, DEFAULT_GROUP_CAP};
use crate::table::{inner_product, CharacterTable, ClassPartition, Sl2Class};
use crate::twisted_algebra::{mu, mu_checked, s_of, AlgebraElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Gauss,
    Cocycle,
    Eta,
    Characters,
    Factorize,
    Frames,
    Constructions,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Gauss, Suite::Cocycle, Suite::Eta, Suite::Characters, Suite::Factorize, Suite::Frames, Suite::Constructions];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gauss => "gauss",
            Suite::Cocycle => "cocycle",
            Suite::Eta => "eta",
            Suite::Characters => "characters",
            Suite::Factorize => "factorize",
            Suite::Frames => "frames",
            Suite::Constructions => "constructions",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
    pub exec: Exec,
    pub group_cap: u128,
    pub brute_dim_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 1,
            samples: 100,
            exec: Exec::Parallel,
            group_cap: DEFAULT_GROUP_CAP,
            brute_dim_limit: crate::cyclotomic::DEFAULT_BRUTE_DIM_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: usize,
    pub total: usize,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    /// Checks that did not apply to this (q, n).
    pub skipped: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    fn push(&mut self, suite: Suite, name: impl Into<String>, results: &[bool]) {
        if results.is_empty() {
            return self.skip(suite, format!("{}: no applicable instances", name.into()));
        }
        let passed = results.iter().filter(|&&b| b).count();
        self.checks.push(Check { suite: suite.name(), name: name.into(), passed, total: results.len() });
    }

    fn skip(&mut self, suite: Suite, why: impl Into<String>) {
        self.skipped.push(format!("{}: {}", suite.name(), why.into()));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let mark = if c.ok() { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark} [{}] {} ({}/{})\n", c.suite, c.name, c.passed, c.total));
        }
        for s in &self.skipped {
            out.push_str(&format!("SKIP {s}\n"));
        }
        out
    }
}

pub fn run(space: &SympSpace, suite: Suite, opts: &VerifyOptions) -> Result<Report> {
    let mut report = Report::default();
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for s in suites {
        match s {
            Suite::Gauss => gauss(space.field(), opts, &mut report)?,
            Suite::Cocycle => cocycle(space, opts, &mut report)?,
            Suite::Eta => eta(space, opts, &mut report)?,
            Suite::Characters => characters(space, opts, &mut report)?,
            Suite::Factorize => factorize(space, opts, &mut report)?,
            Suite::Frames => frames(space, opts, &mut report)?,
            Suite::Constructions => constructions(space, opts, &mut report)?,
            Suite::All => unreachable!("expanded above"),
        }
    }
    Ok(report)
}

/// The whole group if it has at most `count` elements, else `count` random elements.
pub fn sample_elements(space: &SympSpace, seed: u64, count: usize) -> Vec<GroupElement> {
    if space.order() <= count as u128 {
        space.enumerate_group().expect("small group")
    } else {
        space.random_elements(seed, count)
    }
}

/// All pairs if |G|² ≤ count, else `count` random pairs.
pub fn sample_pairs(space: &SympSpace, seed: u64, count: usize) -> Vec<(GroupElement, GroupElement)> {
    let order = space.order();
    if order * order <= count as u128 {
        let all = space.enumerate_group().expect("small group");
        all.iter().flat_map(|g| all.iter().map(move |h| (g.clone(), h.clone()))).collect()
    } else {
        let xs = space.random_elements(seed, 2 * count);
        xs.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect()
    }
}

/// A random symmetric form of dimension `dim` with an optional linear part.
pub fn random_form(f: &GaloisField, dim: usize, with_linear: bool, rng: &mut ChaCha8Rng) -> QuadraticForm {
    let q = f.q();
    let mut gram = FqMatrix::zeros(f, dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let x = f.elem(rng.gen_range(0..q)).expect("in range");
            gram.set(i, j, x);
            gram.set(j, i, x);
        }
    }
    let linear = with_linear.then(|| (0..dim).map(|_| f.elem(rng.gen_range(0..q)).expect("in range")).collect());
    QuadraticForm::new(f, gram, linear).expect("symmetric by construction")
}

fn gauss(f: &GaloisField, opts: &VerifyOptions, report: &mut Report) -> Result<()> {
    let s = Suite::Gauss;
    let r = rho(f);
    let dq = CycNumber::from_int(f.p(), f.delta() as i64 * f.q() as i64);
    report.push(s, "ρ² = δq", &[&r * &r == dq]);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let max_dim = opts.brute_dim_limit.min(3);
    let forms: Vec<QuadraticForm> = (0..opts.samples)
        .map(|i| {
            let dim = 1 + i % max_dim;
            random_form(f, dim, i % 2 == 1, &mut rng)
        })
        .collect();
    let results = opts.exec.map(&forms, |form| {
        let brute = quad_psi_sum_brute_with_limit(form, opts.brute_dim_limit).expect("within limit");
        quad_psi_sum_closed(form).expect("valid form") == brute
    });
    report.push(s, "closed quadratic character sum = brute force", &results);
    Ok(())
}

fn cocycle(space: &SympSpace, opts: &VerifyOptions, report: &mut Report) -> Result<()> {
    let s = Suite::Cocycle;
    let pairs = sample_pairs(space, opts.seed, opts.samples);
    let frame = LagrangianFrame::standard(space);
    let results = opts.exec.map(&pairs, |(g, h)| {
        let (m, consistent) = mu_checked(g, h).expect("same space");
        let gh = g.mul(h);
        let eta_ok = eta_closed(&gh) == &m * &(&eta_closed(g) * &eta_closed(h));
        let direct_sum = !m.is_one() || g.moved_space().intersect(&h.moved_space()).dim() == 0;
        (consistent, eta_ok, direct_sum)
    });
    report.push(s, "s(g)s(h) = μ(g,h)s(gh)", &results.iter().map(|r| r.0).collect::<Vec<_>>());
    report.push(s, "η(gh) = μ(g,h)η(g)η(h)", &results.iter().map(|r| r.1).collect::<Vec<_>>());
    report.push(s, "μ(g,h) = 1 ⇒ V^{g−1} ∩ V^{h−1} = 0", &results.iter().map(|r| r.2).collect::<Vec<_>>());
    let t_ok = opts.exec.map(&pairs, |(g, h)| {
        let tg = t_matrix(g, &frame).expect("frame of this space");
        let th = t_matrix(h, &frame).expect("frame of this space");
        tg.mul(&th) == t_matrix(&g.mul(h), &frame).expect("frame of this space")
    });
    report.push(s, "t(g)t(h) = t(gh)", &t_ok);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let gx: Vec<(GroupElement, usize)> = sample_elements(space, opts.seed, opts.samples)
        .into_iter()
        .map(|g| (g, rng.gen_range(0..space.size())))
        .collect();
    let conj = opts.exec.map(&gx, |(g, xi)| {
        let sg = s_of(g);
        let sinv = crate::twisted_algebra::s_inverse(g);
        let x = AlgebraElement::from_index(space, *xi, CycNumber::one(space.field().p()));
        let lhs = sinv.mul(&x).and_then(|a| a.mul(&sg)).expect("same space");
        lhs == AlgebraElement::basis(space, &g.act(&space.vector(*xi)))
    });
    report.push(s, "s(g)⁻¹(x)s(g) = (x^g)", &conj);
    Ok(())
}

/// Random elements stabilizing W = span(e₁..e_n) of a standard space.
pub fn random_w_stable(space: &SympSpace, seed: u64, count: usize) -> Vec<GroupElement> {
    let f = space.field();
    let n = space.n();
    let q = space.q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let rows: Vec<Vec<u32>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect()).collect();
        let a = FqMatrix::from_indices(f, &rows).expect("entries in range");
        let Ok(a_inv) = a.inverse() else { continue };
        let mut m = FqMatrix::zeros(f, 2 * n, 2 * n);
        let d = a_inv.transpose();
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, a.get(i, j));
                m.set(n + i, n + j, d.get(i, j));
            }
        }
        let mut g = space.element(m).expect("diag(A, A^{-T}) is symplectic");
        for _ in 0..3 {
            let mut c = space.zero_vector();
            for x in c.iter_mut().take(n) {
                *x = f.elem(rng.gen_range(0..q)).expect("in range");
            }
            if c.iter().all(|x| x.is_zero()) {
                continue;
            }
            let gamma = f.elem(rng.gen_range(1..q)).expect("in range");
            g = g.mul(&space.transvection(&c, gamma).expect("nonzero inputs"));
        }
        out.push(g);
    }
    out
}

fn eta(space: &SympSpace, opts: &VerifyOptions, report: &mut Report) -> Result<()> {
    let s = Suite::Eta;
    let els = sample_elements(space, opts.seed, opts.samples);
    let standard = LagrangianFrame::standard(space);
    let u = space.random_elements(opts.seed.wrapping_add(7), 1).remove(0);
    let frames = [("standard", standard.clone()), ("swapped", LagrangianFrame::swapped(space)), ("moved", standard.transformed(&u))];
    for (label, frame) in &frames {
        let results = opts.exec.map(&els, |g| eta_det(g, frame).expect("exact determinant") == eta_closed(g));
        report.push(s, format!("η by determinants = closed η ({label} frame)"), &results);
    }
    if space.is_standard() {
        let ws = random_w_stable(space, opts.seed, opts.samples.min(50));
        let results = opts.exec.map(&ws, |g| eta_w_stable(g, &standard).expect("W-stable") == eta_closed(g));
        report.push(s, "η for W-stable g = closed η", &results);
        let signs = opts.exec.map(&ws, |g| {
            let gstar = induced_on_wstar(g, &standard);
            let chi = space.field().quadratic_character(gstar.det()).expect("invertible");
            sigma_sign(&gstar, &standard).expect("invertible") == chi
        });
        report.push(s, "σ(g*) = χ(det g*)", &signs);
    } else {
        report.skip(s, "W-stable checks need a standard space");
    }
    let delta_n = if space.field().delta() == -1 && space.n() % 2 == 1 { -1 } else { 1 };
    let qn_inv = BigRational::new(BigInt::from(delta_n), BigInt::from(standard.size()));
    let minus = eta_det(&space.minus_one(), &standard)? == CycNumber::from_rational(space.field().p(), &qn_inv);
    report.push(s, "η(−1) = δ^n q^{−n}", &[minus]);
    Ok(())
}

fn characters(space: &SympSpace, opts: &VerifyOptions, report: &mut Report) -> Result<()> {
    let s = Suite::Characters;
    let f = space.field();
    let els = sample_elements(space, opts.seed, opts.samples);
    let identities = opts.exec.map(&els, special_identities);
    let mut by_name: BTreeMap<&'static str, Vec<bool>> = BTreeMap::new();
    for list in &identities {
        for c in list {
            by_name.entry(c.name).or_default().push(c.pass);
        }
    }
    for (name, results) in by_name {
        report.push(s, name, &results);
    }
    let frame = LagrangianFrame::standard(space);
    let flat = opts.exec.map(&els, |g| {
        let wv = weil_values(g);
        let t = t_matrix(g, &frame).expect("frame of this space");
        let tr_flat = flat_block(&t, &frame).expect("t(g) commutes with j").trace();
        wv.omega_minus == tr_flat && wv.omega == &wv.omega_minus + &wv.omega_plus && wv.omega == t.trace()
    });
    report.push(s, "ω₋ = tr t(g)♭ and ω = ω₋ + ω₊ = tr t(g)", &flat);
    let xs = space.random_elements(opts.seed.wrapping_add(3), els.len());
    let pairs: Vec<(GroupElement, GroupElement)> = els.iter().cloned().zip(xs).collect();
    let class_fn = opts.exec.map(&pairs, |(g, x)| weil_values(&g.conjugate_by(x)).omega == weil_values(g).omega);
    report.push(s, "ω(x⁻¹gx) = ω(g)", &class_fn);

    if space.order() > opts.group_cap {
        report.skip(s, format!("character table: |G| = {} exceeds the cap", space.order()));
        return Ok(());
    }
    let classes = ClassPartition::new(space, opts.group_cap)?;
    let table = CharacterTable::from_classes(space, &classes, opts.exec);
    let sizes_ok = table.rows.iter().map(|r| r.size as u128).sum::<u128>() == space.order();
    report.push(s, "class sizes sum to |G|", &[sizes_ok]);
    let constant = opts.exec.map_range(classes.len(), |k| {
        let rep = weil_values(classes.representative(k));
        classes.members(k, 4).iter().all(|g| {
            let wv = weil_values(g);
            wv.omega_minus == rep.omega_minus && wv.omega_plus == rep.omega_plus
        })
    });
    report.push(s, "values constant on classes", &constant);
    let norms = [inner_product(&table, 0, 0).is_one(), inner_product(&table, 1, 1).is_one(), inner_product(&table, 0, 1).is_zero()];
    report.push(s, "⟨ω₋,ω₋⟩ = ⟨ω₊,ω₊⟩ = 1, ⟨ω₋,ω₊⟩ = 0", &norms);
    if space.n() == 1 {
        let symbolic = table
            .rows
            .iter()
            .map(|row| {
                let g = space.element_from_indices(&row.representative).expect("listed element");
                let expected = Sl2Class::of(&g).expect("n = 1").expected_values(f);
                row.values().into_iter().zip(&expected).all(|(a, b)| a == b)
            })
            .collect::<Vec<_>>();
        report.push(s, "table matches the symbolic SL(2, q) table", &symbolic);
        report.push(s, "q + 4 classes", &[table.rows.len() == crate::table::sl2_class_count(space.q() as u64)]);
    }
    Ok(())
}

fn factorize(space: &SympSpace, opts: &VerifyOptions, report: &mut Report) -> Result<()> {
    let s = Suite::Factorize;
    let mut els = sample_elements(space, opts.seed, opts.samples);
    els.push(space.minus_one());
    let results = opts.exec.map(&els, |g| {
        let seq = factor(g).expect("factorizable");
        verify_factorization(g, &seq).expect("valid transvections").ok()
    });
    report.push(s, "factor(g) multiplies to g with minimal length", &results);
    Ok(())
}

/// Largest q^n for which the exhaustive matrix-unit checks run.
const MATRIX_UNIT_LIMIT: usize = 9;

fn frames(space: &SympSpace, opts: &VerifyOptions, report: &mut Report) -> Result<()> {
    let s = Suite::Frames;
    let f = space.field();
    let p = f.p();
    let frame = LagrangianFrame::standard(space);
    let size = frame.size();
    let order_ok = (0..frame.half()).all(|i| {
        let a = frame.order()[i];
        frame.in_p(a) && frame.order()[frame.half() + i] == frame.negative(a)
    }) && frame.order()[size - 1] == 0;
    report.push(s, "frame order is P, −P aligned, 0", &[order_ok]);

    let e = e0(&frame);
    let w = frame.w();
    let xs: Vec<usize> = if space.size() <= 81 { (0..space.size()).collect() } else { sample_indices(space.size(), opts) };
    let sandwich = opts.exec.map(&xs, |&xi| {
        let x = space.vector(xi);
        let prod = e.mul(&AlgebraElement::basis(space, &x)).and_then(|a| a.mul(&e)).expect("same space");
        if w.contains(&x) {
            prod == e
        } else {
            prod.is_empty()
        }
    });
    report.push(s, "e₀(x)e₀ = e₀ if x ∈ W, else 0", &sandwich);
    let traces = opts.exec.map(&xs, |&xi| {
        let tr = to_matrix(&AlgebraElement::from_index(space, xi, CycNumber::one(p)), &frame).expect("same space").trace();
        tr == CycNumber::from_int(p, if xi == 0 { size as i64 } else { 0 })
    });
    report.push(s, "tr[(x)] = q^n if x = 0, else 0", &traces);

    if size <= MATRIX_UNIT_LIMIT {
        let units: Vec<AlgebraElement> = (0..size * size).map(|k| matrix_unit(&frame, k / size, k % size)).collect();
        let idx: Vec<usize> = (0..size.pow(4)).collect();
        let rel = opts.exec.map(&idx, |&k| {
            let (ab, cd) = (k / (size * size), k % (size * size));
            let (b, c) = (ab % size, cd / size);
            let prod = units[ab].mul(&units[cd]).expect("same space");
            if b == c {
                prod == units[(ab / size) * size + cd % size]
            } else {
                prod.is_empty()
            }
        });
        report.push(s, "e_ab e_cd = [b = c] e_ad", &rel);
        let mut total = AlgebraElement::zero(space);
        for a in 0..size {
            total = total.add(&units[a * size + a])?;
        }
        report.push(s, "Σ_a e_aa = (0)", &[total == AlgebraElement::one(space)]);
    } else {
        report.skip(s, format!("matrix-unit relations: q^n = {size} exceeds {MATRIX_UNIT_LIMIT}"));
    }

    let pairs: Vec<(usize, usize)> = {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (0..opts.samples.min(200)).map(|_| (rng.gen_range(0..space.size()), rng.gen_range(0..space.size()))).collect()
    };
    let hom = opts.exec.map(&pairs, |&(xi, yi)| {
        let mut rng = ChaCha8Rng::seed_from_u64((xi * space.size() + yi) as u64);
        let a = random_algebra_element(space, xi, &mut rng);
        let b = random_algebra_element(space, yi, &mut rng);
        let lhs = to_matrix(&a.mul(&b).expect("same space"), &frame).expect("same space");
        lhs == to_matrix(&a, &frame).expect("same space").mul(&to_matrix(&b, &frame).expect("same space"))
    });
    report.push(s, "to_matrix is multiplicative", &hom);

    let j = j_matrix(&frame);
    let delta_n = if f.delta() == -1 && space.n() % 2 == 1 { -1 } else { 1 };
    let t_minus = t_matrix(&space.minus_one(), &frame)? == j.scale(&CycNumber::from_int(p, delta_n));
    report.push(s, "t(−1) = δ^n [j]", &[t_minus]);
    let flat_j = flat_block(&j, &frame)? == CycMatrix::identity(p, frame.half()).scale(&CycNumber::from_int(p, -1));
    report.push(s, "[j]♭ = −I", &[flat_j]);

    let center = opts.exec.map_range(space.size().min(81) - 1, |k| {
        let v = space.vector(k + 1);
        (0..space.size()).any(|xi| {
            let x = space.vector(xi);
            space.f_pair(&x, &v) != space.f_pair(&v, &x)
        })
    });
    report.push(s, "no (v) with v ≠ 0 is central", &center);

    if space.n() == 1 {
        let cs: Vec<usize> = (1..space.size()).collect();
        let qinv = BigRational::new(BigInt::from(1), BigInt::from(f.q()));
        let ident = opts.exec.map(&cs, |&ci| {
            let c = space.vector(ci);
            let lhs = AlgebraElement::basis(space, &c).add(&AlgebraElement::basis(space, &vec_neg(f, &c))).expect("same space");
            let mut sum = AlgebraElement::zero(space);
            for gamma in f.nonzero_elements() {
                let coeff = &psi(f, f.neg(gamma)) - &CycNumber::one(p);
                let h = space.transvection(&c, gamma).expect("nonzero inputs");
                sum = sum.add(&s_of(&h).scale(&coeff)).expect("same space");
            }
            lhs == AlgebraElement::one(space).add(&sum.scale_rational(&qinv)).expect("same space")
        });
        report.push(s, "(c) + (−c) = (0) + q⁻¹ Σ_γ (ψ(−γ) − 1) s(h_γ)", &ident);
    }

    let els = sample_elements(space, opts.seed, opts.samples.min(50));
    let monomial = opts.exec.map(&els, |g| {
        if !g.stabilizes(&w) {
            return true;
        }
        let m = s_matrix(g, &frame).expect("frame of this space");
        (0..size).all(|i| (0..size).filter(|&jj| !m.entries.get(i, jj).is_zero()).count() == 1)
    });
    report.push(s, "[s(g)] is monomial when W^g = W", &monomial);
    let inv_mu = opts.exec.map(&els, |g| {
        let h = g.inverse();
        mu(g, &h) == CycNumber::from_int(p, g.moved_space().size() as i64)
    });
    report.push(s, "μ(g, g⁻¹) = |V^{g−1}|", &inv_mu);
    Ok(())
}

fn sample_indices(len: usize, opts: &VerifyOptions) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out: Vec<usize> = vec![0];
    out.extend((0..opts.samples).map(|_| rng.gen_range(0..len)));
    out
}

fn random_algebra_element(space: &SympSpace, seed_index: usize, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let p = space.field().p();
    let mut a = AlgebraElement::from_index(space, seed_index, CycNumber::zeta_pow(p, rng.gen_range(0..p as i64)));
    for _ in 0..2 {
        let xi = rng.gen_range(0..space.size());
        let c = CycNumber::from_int(p, rng.gen_range(-3..=3));
        a = a.add(&AlgebraElement::from_index(space, xi, c)).expect("same space");
    }
    a
}

/// Largest q^{2n} for which the explicit torus models are built.
const CONSTRUCTION_LIMIT: u64 = 729;

fn constructions(space: &SympSpace, opts: &VerifyOptions, report: &mut Report) -> Result<()> {
    let s = Suite::Constructions;
    let f = space.field();
    let q = f.q() as u64;
    let n = space.n();
    if f.e() != 1 {
        report.skip(s, "torus models need prime q");
        return Ok(());
    }
    if q.pow(2 * n as u32) > CONSTRUCTION_LIMIT {
        report.skip(s, format!("torus models: q^(2n) exceeds {CONSTRUCTION_LIMIT}"));
        return Ok(());
    }
    let p = f.p();
    let circle = CircleModel::new(q, n)?;
    let tori: Vec<_> = circle.elements().into_iter().filter(|t| t.order > 2).collect();
    let circ = opts.exec.map(&tori, |t| {
        let wv = weil_values(&t.g);
        let chi = CycNumber::from_int(p, -(t.chi_z as i64));
        (wv.omega == chi, wv.omega_minus == chi)
    });
    report.push(s, "circle torus: ω = −χ_Z(z)", &circ.iter().map(|r| r.0).collect::<Vec<_>>());
    report.push(s, "circle torus: ω₋ = −χ_Z(z)", &circ.iter().map(|r| r.1).collect::<Vec<_>>());
    let frame = LagrangianFrame::standard(&circle.space);
    let eta_ok = opts.exec.map(&tori, |t| eta_det(&t.g, &frame).expect("exact determinant") == eta_closed(&t.g));
    report.push(s, "circle torus: η by determinants = closed η", &eta_ok);
    let split = SplitModel::new(q, n)?;
    let tori: Vec<_> = split.elements().into_iter().filter(|t| t.order > 2).collect();
    let sp_ok = opts.exec.map(&tori, |t| weil_values(&t.g).omega_minus.is_zero());
    report.push(s, "split torus: ω₋ = 0", &sp_ok);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(q: u64, n: usize) -> SympSpace {
        SympSpace::standard(&GaloisField::from_q(q).unwrap(), n).unwrap()
    }

    #[test]
    fn suite_names() {
        assert_eq!("cocycle".parse::<Suite>().unwrap(), Suite::Cocycle);
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert_eq!("bogus".parse::<Suite>(), Err(Error::UnknownSuite("bogus".into())));
    }

    #[test]
    fn all_suites_pass_on_sp23() {
        let opts = VerifyOptions { samples: 600, ..Default::default() };
        let report = run(&sp(3, 1), Suite::All, &opts).unwrap();
        assert!(report.ok(), "{}", report.to_text());
        let cocycle = report.checks.iter().find(|c| c.name == "t(g)t(h) = t(gh)").unwrap();
        assert_eq!(cocycle.total, 576);
    }

    #[test]
    fn cocycle_suite_on_sp43() {
        let opts = VerifyOptions { samples: 40, ..Default::default() };
        let report = run(&sp(3, 2), Suite::Cocycle, &opts).unwrap();
        assert!(report.ok(), "{}", report.to_text());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let space = sp(5, 1);
        let par = VerifyOptions { samples: 30, ..Default::default() };
        let seq = VerifyOptions { exec: Exec::Sequential, ..par };
        for suite in [Suite::Eta, Suite::Factorize, Suite::Gauss] {
            assert_eq!(run(&space, suite, &par).unwrap(), run(&space, suite, &seq).unwrap());
        }
    }

    #[test]
    fn prime_power_skips_constructions() {
        let report = run(&sp(9, 1), Suite::Constructions, &VerifyOptions::default()).unwrap();
        assert!(report.checks.is_empty());
        assert_eq!(report.skipped.len(), 1);
    }
}
