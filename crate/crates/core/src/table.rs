//! Conjugacy classes and the table of Weil character values.
//!
//! Classes are orbits of the conjugation action of a generating set, found by
//! breadth-first search over the enumerated group. Class order is the order
//! in which the enumeration first meets each class, and the representative is
//! that first element.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{rho, rho_form_string, CycNumber};
use crate::error::{Error, Result};
use crate::field::GaloisField;
use crate::linalg::FqMatrix;
use crate::matrix_rep::weil_values;
use crate::par::Exec;
use crate::symplectic::{GroupElement, SympSpace};

/// The conjugacy class partition of an enumerated Sp(V).
#[derive(Clone, Debug)]
pub struct ClassPartition {
    pub elements: Vec<GroupElement>,
    /// class_of[i] is the class of elements[i].
    pub class_of: Vec<usize>,
    /// Index into `elements` of each class representative.
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl ClassPartition {
    pub fn new(space: &SympSpace, cap: u128) -> Result<Self> {
        let (elements, gens) = space.enumerate_with_generators(cap)?;
        let index: HashMap<&FqMatrix, usize> = elements.iter().enumerate().map(|(i, g)| (g.mat(), i)).collect();
        let inverses: Vec<GroupElement> = gens.iter().map(|x| x.inverse()).collect();
        let mut class_of = vec![usize::MAX; elements.len()];
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        for start in 0..elements.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let k = representatives.len();
            representatives.push(start);
            class_of[start] = k;
            let mut stack = vec![start];
            let mut size = 0;
            while let Some(i) = stack.pop() {
                size += 1;
                for (x, xinv) in gens.iter().zip(&inverses) {
                    let c = xinv.mul(&elements[i]).mul(x);
                    let j = index[c.mat()];
                    if class_of[j] == usize::MAX {
                        class_of[j] = k;
                        stack.push(j);
                    }
                }
            }
            sizes.push(size);
        }
        Ok(ClassPartition { elements, class_of, representatives, sizes })
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn representative(&self, k: usize) -> &GroupElement {
        &self.elements[self.representatives[k]]
    }

    /// Up to `limit` members of class k, in enumeration order.
    pub fn members(&self, k: usize, limit: usize) -> Vec<&GroupElement> {
        self.elements.iter().zip(&self.class_of).filter(|(_, &c)| c == k).map(|(g, _)| g).take(limit).collect()
    }
}

/// Class types of Sp(2, q) = SL(2, q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sl2Class {
    Identity,
    MinusIdentity,
    /// [[1, α], [0, 1]] up to conjugacy, by χ(α).
    Unipotent { chi: i32 },
    /// [[−1, β], [0, −1]] up to conjugacy, by χ(β).
    MinusUnipotent { chi: i32 },
    /// Eigenvalues z, z⁻¹ ∈ GF(q), z ≠ ±1.
    SplitTorus { order: u64, trace: u32 },
    /// Eigenvalues in GF(q²) \ GF(q).
    NonsplitTorus { order: u64, trace: u32 },
}

impl Sl2Class {
    pub fn of(g: &GroupElement) -> Result<Self> {
        let sp = g.space();
        if sp.n() != 1 {
            return Err(Error::InvalidInput("SL(2, q) classes need n = 1".into()));
        }
        let f = sp.field();
        let sign_of = |u: &GroupElement| {
            // α = −γ⁻¹ for the theta form [γ] of u, so χ(α) = δχ(γ)
            let gamma = u.theta_data().theta.get(0, 0);
            f.delta() * f.quadratic_character(gamma).expect("nondegenerate")
        };
        if g.is_identity() {
            return Ok(Sl2Class::Identity);
        }
        let minus = g.neg();
        if minus.is_identity() {
            return Ok(Sl2Class::MinusIdentity);
        }
        if g.moved_space().dim() == 1 {
            return Ok(Sl2Class::Unipotent { chi: sign_of(g) });
        }
        if minus.moved_space().dim() == 1 {
            // g = −u with u = [[1, −β], [0, 1]], so χ(β) = δχ(α_u) = χ(γ_u)
            return Ok(Sl2Class::MinusUnipotent { chi: f.delta() * sign_of(&minus) });
        }
        let m = g.mat();
        let trace = f.add(m.get(0, 0), m.get(1, 1));
        let disc = f.sub(f.mul(trace, trace), f.from_int(4));
        let order = g.order();
        Ok(if f.is_square(disc) {
            Sl2Class::SplitTorus { order, trace: trace.index() }
        } else {
            Sl2Class::NonsplitTorus { order, trace: trace.index() }
        })
    }

    pub fn label(&self) -> String {
        let sign = |c: i32| if c > 0 { '+' } else { '-' };
        match *self {
            Sl2Class::Identity => "1".into(),
            Sl2Class::MinusIdentity => "-1".into(),
            Sl2Class::Unipotent { chi } => format!("u(chi={})", sign(chi)),
            Sl2Class::MinusUnipotent { chi } => format!("-u(chi={})", sign(chi)),
            Sl2Class::SplitTorus { order, trace } => format!("split(o={order},tr={trace})"),
            Sl2Class::NonsplitTorus { order, trace } => format!("nonsplit(o={order},tr={trace})"),
        }
    }

    /// (ω₋, ω₊, ω, ω₋′, ω₊′) from the symbolic SL(2, q) table, evaluated in K.
    pub fn expected_values(&self, f: &GaloisField) -> [CycNumber; 5] {
        let p = f.p();
        let q = f.q() as i64;
        let delta = f.delta() as i64;
        let int = |v: i64| CycNumber::from_int(p, v);
        let half = |z: CycNumber| z.scale_rational(&num_rational::BigRational::new(1.into(), 2.into()));
        let sign_pow = |k: u64| if k % 2 == 0 { 1 } else { -1 };
        let row = |r: &CycNumber| -> [CycNumber; 3] {
            match *self {
                Sl2Class::Identity => [int((q - 1) / 2), int((q + 1) / 2), int(q)],
                Sl2Class::MinusIdentity => [int(-delta * (q - 1) / 2), int(delta * (q + 1) / 2), int(delta)],
                Sl2Class::Unipotent { chi } => {
                    let rc = r.scale_int(chi as i64);
                    [half(&rc - &int(1)), half(&rc + &int(1)), rc]
                }
                Sl2Class::MinusUnipotent { chi } => {
                    let rc = r.scale_int(chi as i64);
                    [half(&int(delta) - &rc), half(&rc + &int(delta)), int(delta)]
                }
                Sl2Class::SplitTorus { order, .. } => {
                    let v = int(sign_pow((q as u64 - 1) / order));
                    [int(0), v.clone(), v]
                }
                Sl2Class::NonsplitTorus { order, .. } => {
                    let v = int(-sign_pow((q as u64 + 1) / order));
                    [v.clone(), int(0), v]
                }
            }
        };
        let r = rho(f);
        let [m, pl, w] = row(&r);
        let [mp, pp, _] = row(&-&r);
        [m, pl, w, mp, pp]
    }
}

/// Number of conjugacy classes of SL(2, q), q odd.
pub fn sl2_class_count(q: u64) -> usize {
    q as usize + 4
}

/// One row of the Weil character table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub representative: Vec<Vec<u32>>,
    pub size: u64,
    pub order: u64,
    pub omega_minus: CycNumber,
    pub omega_plus: CycNumber,
    pub omega: CycNumber,
    pub omega_minus_prime: CycNumber,
    pub omega_plus_prime: CycNumber,
    /// The same five values written as a + bρ, when rational a, b exist.
    pub rho_forms: Vec<Option<String>>,
}

impl TableRow {
    pub fn values(&self) -> [&CycNumber; 5] {
        [&self.omega_minus, &self.omega_plus, &self.omega, &self.omega_minus_prime, &self.omega_plus_prime]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub q: u32,
    pub n: usize,
    pub modulus: Vec<u32>,
    pub group_order: u128,
    pub rows: Vec<TableRow>,
}

pub fn class_label(g: &GroupElement, k: usize) -> String {
    match Sl2Class::of(g) {
        Ok(c) => c.label(),
        Err(_) => format!("class-{k}"),
    }
}

impl CharacterTable {
    pub fn build(space: &SympSpace, cap: u128, exec: Exec) -> Result<Self> {
        let classes = ClassPartition::new(space, cap)?;
        Ok(Self::from_classes(space, &classes, exec))
    }

    pub fn from_classes(space: &SympSpace, classes: &ClassPartition, exec: Exec) -> Self {
        let f = space.field();
        let r = rho(f);
        let rows = exec.map_range(classes.len(), |k| {
            let g = classes.representative(k);
            let wv = weil_values(g);
            let values = [&wv.omega_minus, &wv.omega_plus, &wv.omega, &wv.omega_minus_prime, &wv.omega_plus_prime];
            TableRow {
                label: class_label(g, k),
                representative: g.to_indices(),
                size: classes.sizes[k] as u64,
                order: g.order(),
                rho_forms: values.iter().map(|z| rho_form_string(z, &r)).collect(),
                omega_minus: wv.omega_minus,
                omega_plus: wv.omega_plus,
                omega: wv.omega,
                omega_minus_prime: wv.omega_minus_prime,
                omega_plus_prime: wv.omega_plus_prime,
            }
        });
        CharacterTable { q: space.q(), n: space.n(), modulus: f.modulus().to_vec(), group_order: space.order(), rows }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    /// One line per class; matrices as `r;r` with space-separated entries,
    /// cyclotomic coefficients space-separated.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for row in &self.rows {
            let mut rec = vec![row.label.clone(), matrix_cell(&row.representative), row.size.to_string(), row.order.to_string()];
            rec.extend(row.values().iter().map(|z| z.to_strings().join(" ")));
            rec.extend(row.rho_forms.iter().map(|s| s.clone().unwrap_or_default()));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
    }

    /// Rows parsed back from [`Self::to_csv`].
    pub fn rows_from_csv(s: &str) -> Result<Vec<TableRow>> {
        let bad = |e: String| Error::InvalidInput(format!("csv: {e}"));
        let mut r = csv::Reader::from_reader(s.as_bytes());
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            if rec.len() != CSV_HEADER.len() {
                return Err(bad(format!("expected {} fields", CSV_HEADER.len())));
            }
            let num = |i: usize| rec[i].parse::<u64>().map_err(|e| bad(e.to_string()));
            let cyc = |i: usize| {
                let parts: Vec<String> = rec[i].split(' ').map(str::to_string).collect();
                CycNumber::from_strings(&parts)
            };
            let representative = rec[1]
                .split(';')
                .map(|r| r.split(' ').map(|x| x.parse::<u32>().map_err(|e| bad(e.to_string()))).collect())
                .collect::<Result<Vec<Vec<u32>>>>()?;
            rows.push(TableRow {
                label: rec[0].to_string(),
                representative,
                size: num(2)?,
                order: num(3)?,
                omega_minus: cyc(4)?,
                omega_plus: cyc(5)?,
                omega: cyc(6)?,
                omega_minus_prime: cyc(7)?,
                omega_plus_prime: cyc(8)?,
                rho_forms: (9..14).map(|i| (!rec[i].is_empty()).then(|| rec[i].to_string())).collect(),
            });
        }
        Ok(rows)
    }
}

const CSV_HEADER: [&str; 14] = [
    "label",
    "representative",
    "size",
    "order",
    "omega_minus",
    "omega_plus",
    "omega",
    "omega_minus_prime",
    "omega_plus_prime",
    "omega_minus_rho",
    "omega_plus_rho",
    "omega_rho",
    "omega_minus_prime_rho",
    "omega_plus_prime_rho",
];

fn matrix_cell(m: &[Vec<u32>]) -> String {
    let mut out = String::new();
    for (i, row) in m.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        for (j, x) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{x}").expect("string write");
        }
    }
    out
}

/// (1/|G|) Σ_g χ₁(g)·conj(χ₂(g)) over the table's classes, for value columns i and j.
pub fn inner_product(table: &CharacterTable, i: usize, j: usize) -> CycNumber {
    let p = table.rows.first().map_or(3, |r| r.omega.p());
    let mut acc = CycNumber::zero(p);
    for row in &table.rows {
        let v = row.values();
        acc += &(v[i] * &v[j].conj()).scale_int(row.size as i64);
    }
    let order = num_bigint::BigInt::from(table.group_order);
    acc.scale_rational(&num_rational::BigRational::new(1.into(), order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::DEFAULT_GROUP_CAP;

    fn sp(q: u64, n: usize) -> SympSpace {
        SympSpace::standard(&GaloisField::from_q(q).unwrap(), n).unwrap()
    }

    #[test]
    fn sl2_class_counts_and_sizes() {
        for q in [3u64, 5, 7, 9] {
            let s = sp(q, 1);
            let classes = ClassPartition::new(&s, DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(classes.len(), sl2_class_count(q), "q = {q}");
            assert_eq!(classes.sizes.iter().sum::<usize>() as u128, s.order());
            let mut kinds: Vec<Sl2Class> = (0..classes.len()).map(|k| Sl2Class::of(classes.representative(k)).unwrap()).collect();
            kinds.sort_by_key(|k| format!("{k:?}"));
            kinds.dedup();
            assert_eq!(kinds.len(), classes.len());
        }
    }

    #[test]
    fn class_labels_are_constant_on_classes() {
        let s = sp(5, 1);
        let classes = ClassPartition::new(&s, DEFAULT_GROUP_CAP).unwrap();
        for (g, &k) in classes.elements.iter().zip(&classes.class_of) {
            assert_eq!(Sl2Class::of(g).unwrap(), Sl2Class::of(classes.representative(k)).unwrap());
        }
    }

    #[test]
    fn sp23_table_matches_symbolic_values() {
        let s = sp(3, 1);
        let t = CharacterTable::build(&s, DEFAULT_GROUP_CAP, Exec::Sequential).unwrap();
        assert_eq!(t.rows.len(), 7);
        let id = &t.rows[0];
        assert_eq!(id.label, "1");
        assert_eq!([&id.omega_minus, &id.omega_plus, &id.omega], [&CycNumber::from_int(3, 1), &CycNumber::from_int(3, 2), &CycNumber::from_int(3, 3)]);
        let u = t.rows.iter().find(|r| r.label == "u(chi=+)").unwrap();
        assert_eq!(u.omega_minus, CycNumber::zeta_pow(3, 1));
        let m = t.rows.iter().find(|r| r.label == "-1").unwrap();
        assert_eq!(m.omega, CycNumber::from_int(3, -1));
        for row in &t.rows {
            let g = s.element_from_indices(&row.representative).unwrap();
            let expected = Sl2Class::of(&g).unwrap().expected_values(s.field());
            let got = row.values();
            for i in 0..5 {
                assert_eq!(got[i], &expected[i], "{} column {i}", row.label);
            }
        }
    }

    #[test]
    fn symbolic_values_for_larger_fields() {
        for q in [5u64, 7, 9, 11] {
            let s = sp(q, 1);
            let t = CharacterTable::build(&s, DEFAULT_GROUP_CAP, Exec::Parallel).unwrap();
            for row in &t.rows {
                let g = s.element_from_indices(&row.representative).unwrap();
                let expected = Sl2Class::of(&g).unwrap().expected_values(s.field());
                assert_eq!(row.values().map(Clone::clone), expected, "q = {q}, {}", row.label);
            }
        }
    }

    #[test]
    fn irreducibility_sp25() {
        let t = CharacterTable::build(&sp(5, 1), DEFAULT_GROUP_CAP, Exec::Parallel).unwrap();
        assert!(inner_product(&t, 0, 0).is_one());
        assert!(inner_product(&t, 1, 1).is_one());
        assert!(inner_product(&t, 0, 1).is_zero());
    }

    #[test]
    fn json_and_csv_round_trip() {
        let t = CharacterTable::build(&sp(3, 1), DEFAULT_GROUP_CAP, Exec::Parallel).unwrap();
        assert_eq!(CharacterTable::from_json(&t.to_json()).unwrap(), t);
        assert_eq!(CharacterTable::rows_from_csv(&t.to_csv()).unwrap(), t.rows);
        assert_eq!(t, CharacterTable::build(&sp(3, 1), DEFAULT_GROUP_CAP, Exec::Sequential).unwrap());
    }

    #[test]
    fn rho_forms_of_transvection_rows() {
        let t = CharacterTable::build(&sp(3, 1), DEFAULT_GROUP_CAP, Exec::Parallel).unwrap();
        let u = t.rows.iter().find(|r| r.label == "u(chi=+)").unwrap();
        assert_eq!(u.rho_forms[0].as_deref(), Some("(1/2)ρ - 1/2"));
        assert_eq!(u.rho_forms[2].as_deref(), Some("ρ"));
    }
}
