//! Exact linear programming over the compact slices of matching cones.
//!
//! The feasible sets here are polytopes P = { x : M x = 0, x >= 0,
//! x_i = 0 (i forced), sum x = 1 }: matching cones cut to the standard
//! simplex. All arithmetic is rational and exact; the simplex uses Bland's
//! rule, so it terminates deterministically.
//!
//! A presolve pass shrinks the systems dramatically before the tableau is
//! built: rows whose surviving entries share one sign force those columns to
//! zero, and two-term rows with opposite equal coefficients merge their
//! columns. The solution of the reduced problem is expanded back and
//! re-checked against the original constraints, so presolve cannot silently
//! change the answer.

use crate::error::LpError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Equality system M x = 0 over `n` columns with some columns pinned to zero.
/// Rows are sparse (column, coefficient) lists with distinct columns.
#[derive(Clone, Debug)]
pub struct ConeSystem {
    pub n: usize,
    pub rows: Vec<Vec<(usize, i64)>>,
    pub forced_zero: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Optimal { value: BigRational, vertex: Vec<BigRational> },
}

struct Presolve {
    /// Original column -> merged group representative (usize::MAX if zeroed).
    rep_of: Vec<usize>,
    /// Live representative columns in ascending order.
    reps: Vec<usize>,
    /// Group size per live representative (multiplicity in the sum row).
    mult: Vec<u64>,
    /// Surviving rows over reduced indices.
    rows: Vec<Vec<(usize, BigInt)>>,
}

fn presolve(sys: &ConeSystem) -> Presolve {
    let n = sys.n;
    let mut parent: Vec<usize> = (0..n).collect();
    let mut zero: Vec<bool> = sys.forced_zero.clone();

    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    let mut live_rows: Vec<&Vec<(usize, i64)>> = sys.rows.iter().collect();
    loop {
        let mut changed = false;
        let mut kept = Vec::with_capacity(live_rows.len());
        for row in live_rows {
            // Combine coefficients by representative, dropping zeroed groups.
            let mut entries: Vec<(usize, i64)> = Vec::with_capacity(row.len());
            for &(c, a) in row {
                let r = find(&mut parent, c);
                if zero[r] {
                    continue;
                }
                match entries.iter_mut().find(|e| e.0 == r) {
                    Some(e) => e.1 += a,
                    None => entries.push((r, a)),
                }
            }
            entries.retain(|e| e.1 != 0);
            if entries.is_empty() {
                changed = true;
                continue;
            }
            let pos = entries.iter().filter(|e| e.1 > 0).count();
            if pos == 0 || pos == entries.len() {
                for (r, _) in entries {
                    zero[r] = true;
                }
                changed = true;
                continue;
            }
            if entries.len() == 2 && entries[0].1 == -entries[1].1 {
                let (a, b) = (entries[0].0, entries[1].0);
                let (ra, rb) = (a.min(b), a.max(b));
                parent[rb] = ra;
                zero[ra] = zero[ra] || zero[rb];
                changed = true;
                continue;
            }
            kept.push(row);
        }
        live_rows = kept;
        if !changed {
            break;
        }
    }

    let mut rep_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    let mut mult = Vec::new();
    let mut reduced_index = vec![usize::MAX; n];
    for c in 0..n {
        let r = find(&mut parent, c);
        if zero[r] {
            continue;
        }
        if reduced_index[r] == usize::MAX {
            reduced_index[r] = reps.len();
            reps.push(r);
            mult.push(0);
        }
        rep_of[c] = reduced_index[r];
        mult[reduced_index[r]] += 1;
    }

    let rows = live_rows
        .into_iter()
        .map(|row| {
            let mut entries: Vec<(usize, BigInt)> = Vec::with_capacity(row.len());
            for &(c, a) in row {
                let r = find(&mut parent, c);
                if zero[r] {
                    continue;
                }
                let ri = reduced_index[r];
                match entries.iter_mut().find(|e| e.0 == ri) {
                    Some(e) => e.1 += a,
                    None => entries.push((ri, BigInt::from(a))),
                }
            }
            entries.retain(|e| !e.1.is_zero());
            entries.sort_by_key(|e| e.0);
            entries
        })
        .filter(|r| !r.is_empty())
        .collect();

    Presolve { rep_of, reps, mult, rows }
}

/// Dense tableau with explicit artificial columns; Bland's rule throughout.
struct Tableau {
    /// m rows of length vars + 1 (rhs in the last slot).
    a: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    vars: usize,
}

impl Tableau {
    fn pivot(&mut self, prow: usize, pcol: usize) {
        let inv = self.a[prow][pcol].clone();
        for x in self.a[prow].iter_mut() {
            *x /= &inv;
        }
        for i in 0..self.a.len() {
            if i == prow || self.a[i][pcol].is_zero() {
                continue;
            }
            let factor = self.a[i][pcol].clone();
            for j in 0..=self.vars {
                let delta = &factor * &self.a[prow][j];
                self.a[i][j] -= delta;
            }
        }
        self.basis[prow] = pcol;
    }

    /// Maximizes c over the current feasible basis; `allowed` masks columns
    /// permitted to enter. Returns the optimal value.
    fn optimize(&mut self, c: &[BigRational], allowed: &dyn Fn(usize) -> bool) -> Result<BigRational, LpError> {
        loop {
            // Multipliers y_i = c_basis[i]; reduced cost r_j = c_j - y . col_j.
            let mut entering = None;
            for j in 0..self.vars {
                if !allowed(j) || self.basis.contains(&j) {
                    continue;
                }
                let mut r = c[j].clone();
                for (i, row) in self.a.iter().enumerate() {
                    if !c[self.basis[i]].is_zero() && !row[j].is_zero() {
                        r -= &c[self.basis[i]] * &row[j];
                    }
                }
                if r.is_positive() {
                    entering = Some(j);
                    break; // Bland: least improving index
                }
            }
            let Some(pcol) = entering else {
                let mut value = BigRational::zero();
                for (i, row) in self.a.iter().enumerate() {
                    value += &c[self.basis[i]] * &row[self.vars];
                }
                return Ok(value);
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if row[pcol].is_positive() {
                    let ratio = &row[self.vars] / &row[pcol];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((prow, _)) = leave else {
                return Err(LpError::Anomaly(
                    "unbounded direction in a normalized cone slice".into(),
                ));
            };
            self.pivot(prow, pcol);
        }
    }
}

/// Maximizes `objective . x` over the polytope of `sys` cut by `sum x = 1`.
/// The returned vertex is a basic feasible point (an extreme point).
pub fn maximize(sys: &ConeSystem, objective: &[BigRational]) -> Result<LpOutcome, LpError> {
    assert_eq!(objective.len(), sys.n);
    let pre = presolve(sys);
    let nr = pre.reps.len();
    if nr == 0 {
        return Ok(LpOutcome::Infeasible);
    }

    // Reduced objective: merged columns share one value, so coefficients add.
    let mut red_obj = vec![BigRational::zero(); nr];
    for c in 0..sys.n {
        if pre.rep_of[c] != usize::MAX {
            red_obj[pre.rep_of[c]] += &objective[c];
        }
    }

    // Rows: equalities (rhs 0) then the normalization row (rhs 1).
    let m = pre.rows.len() + 1;
    let vars = nr + m;
    let mut a = vec![vec![BigRational::zero(); vars + 1]; m];
    for (i, row) in pre.rows.iter().enumerate() {
        for (j, coeff) in row {
            a[i][*j] = BigRational::from(coeff.clone());
        }
    }
    for (j, &mlt) in pre.mult.iter().enumerate() {
        a[m - 1][j] = BigRational::from(BigInt::from(mlt));
    }
    a[m - 1][vars] = BigRational::one();
    for i in 0..m {
        a[i][nr + i] = BigRational::one();
    }
    let mut tab = Tableau { a, basis: (nr..nr + m).collect(), vars };

    // Phase 1: drive out the artificials.
    let mut phase1 = vec![BigRational::zero(); vars];
    for j in nr..vars {
        phase1[j] = -BigRational::one();
    }
    let v1 = tab.optimize(&phase1, &|_| true)?;
    if !v1.is_zero() {
        return Ok(LpOutcome::Infeasible);
    }
    // Pivot any basic artificial out on a real column, or drop its row.
    let mut drop_rows = Vec::new();
    for i in 0..tab.basis.len() {
        if tab.basis[i] >= nr {
            match (0..nr).find(|&j| !tab.a[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => drop_rows.push(i),
            }
        }
    }
    for &i in drop_rows.iter().rev() {
        tab.a.remove(i);
        tab.basis.remove(i);
    }

    // Phase 2: real objective, artificials barred.
    let mut c2 = vec![BigRational::zero(); vars];
    c2[..nr].clone_from_slice(&red_obj);
    let value = tab.optimize(&c2, &|j| j < nr)?;

    let mut reduced = vec![BigRational::zero(); nr];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < nr {
            reduced[b] = tab.a[i][tab.vars].clone();
        }
    }
    let vertex: Vec<BigRational> = (0..sys.n)
        .map(|c| match pre.rep_of[c] {
            usize::MAX => BigRational::zero(),
            r => reduced[r].clone(),
        })
        .collect();

    // Expansion must satisfy the *original* system exactly.
    let mut check_value = BigRational::zero();
    let mut total = BigRational::zero();
    for (x, ob) in vertex.iter().zip(objective) {
        if x.is_negative() {
            return Err(LpError::Anomaly("negative coordinate after expansion".into()));
        }
        check_value += x * ob;
        total += x;
    }
    if check_value != value || !total.is_one() {
        return Err(LpError::Anomaly(
            "presolve expansion disagrees with reduced optimum".into(),
        ));
    }
    for (r, row) in sys.rows.iter().enumerate() {
        let mut acc = BigRational::zero();
        for &(c, coeff) in row {
            acc += BigRational::from(BigInt::from(coeff)) * &vertex[c];
        }
        if !acc.is_zero() {
            return Err(LpError::Anomaly(format!(
                "expanded vertex violates original equality row {r}"
            )));
        }
    }
    for (c, &fz) in sys.forced_zero.iter().enumerate() {
        if fz && !vertex[c].is_zero() {
            return Err(LpError::Anomaly(format!(
                "expanded vertex violates forced zero at column {c}"
            )));
        }
    }

    Ok(LpOutcome::Optimal { value, vertex })
}

/// Scales a nonnegative rational vector to the primitive integer vector on
/// the same ray.
pub fn primitive_integer(x: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for v in x {
        lcm = lcm.lcm(v.denom());
    }
    let ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = g.gcd(v);
    }
    if g.is_zero() || g.is_one() {
        return ints;
    }
    ints.iter().map(|v| v / &g).collect()
}

/// Whether a nonzero solution of M x = 0 lies on an extreme ray of the cone
/// { M x = 0, x >= 0 }: the solution space of the system restricted to the
/// support of `x` must be one-dimensional.
pub fn on_extreme_ray(sys: &ConeSystem, x: &[BigInt]) -> Result<bool, LpError> {
    assert_eq!(x.len(), sys.n);
    if x.iter().all(|v| v.is_zero()) {
        return Err(LpError::InfeasiblePoint);
    }
    let support: Vec<usize> = (0..sys.n).filter(|&c| !x[c].is_zero()).collect();
    for &c in &support {
        if sys.forced_zero[c] {
            return Err(LpError::InfeasiblePoint);
        }
    }
    // Check M x = 0 before asking geometry questions about x.
    for row in &sys.rows {
        let mut acc = BigInt::zero();
        for &(c, coeff) in row {
            acc += coeff * &x[c];
        }
        if !acc.is_zero() {
            return Err(LpError::InfeasiblePoint);
        }
    }
    // Rank of M restricted to the support columns, by exact elimination.
    let mut mat: Vec<Vec<BigRational>> = sys
        .rows
        .iter()
        .map(|row| {
            let mut dense = vec![BigRational::zero(); support.len()];
            for &(c, coeff) in row {
                if let Ok(k) = support.binary_search(&c) {
                    dense[k] = BigRational::from(BigInt::from(coeff));
                }
            }
            dense
        })
        .collect();
    let cols = support.len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..mat.len()).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, p);
        let inv = mat[rank][col].clone();
        for v in mat[rank].iter_mut() {
            *v /= &inv;
        }
        for i in 0..mat.len() {
            if i != rank && !mat[i][col].is_zero() {
                let f = mat[i][col].clone();
                for j in 0..cols {
                    let d = &f * &mat[rank][j];
                    mat[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    Ok(cols - rank == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn system(n: usize, rows: &[&[(usize, i64)]]) -> ConeSystem {
        ConeSystem {
            n,
            rows: rows.iter().map(|r| r.to_vec()).collect(),
            forced_zero: vec![false; n],
        }
    }

    #[test]
    fn maximize_on_plain_simplex_picks_best_coordinate() {
        let sys = system(3, &[]);
        let out = maximize(&sys, &[rat(1), rat(5), rat(2)]).unwrap();
        match out {
            LpOutcome::Optimal { value, vertex } => {
                assert_eq!(value, rat(5));
                assert_eq!(vertex, vec![rat(0), rat(1), rat(0)]);
            }
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn equality_ties_coordinates_together() {
        // x0 = x1, maximize x0 + x1 - x2 => (1/2, 1/2, 0).
        let sys = system(3, &[&[(0, 1), (1, -1)]]);
        let out = maximize(&sys, &[rat(1), rat(1), rat(-1)]).unwrap();
        match out {
            LpOutcome::Optimal { value, vertex } => {
                assert_eq!(value, rat(1));
                assert_eq!(vertex[0], BigRational::new(BigInt::from(1), BigInt::from(2)));
                assert_eq!(vertex[0], vertex[1]);
                assert!(vertex[2].is_zero());
            }
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn same_sign_row_forces_zero_and_infeasibility() {
        // x0 + x1 = 0 with x >= 0 kills both; nothing left to normalize.
        let sys = system(2, &[&[(0, 1), (1, 1)]]);
        assert_eq!(maximize(&sys, &[rat(1), rat(1)]).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn forced_zero_columns_stay_zero() {
        let mut sys = system(3, &[&[(0, 1), (1, -1)]]);
        sys.forced_zero[0] = true;
        // x0 forced zero and x0 = x1 force x1 = 0 too.
        let out = maximize(&sys, &[rat(3), rat(3), rat(1)]).unwrap();
        match out {
            LpOutcome::Optimal { value, vertex } => {
                assert_eq!(value, rat(1));
                assert_eq!(vertex, vec![rat(0), rat(0), rat(1)]);
            }
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn unequal_magnitude_two_term_row_is_not_merged_but_solved() {
        // 2 x0 = x1: optimum of x1 under sum = 1 is x0 = 1/3, x1 = 2/3.
        let sys = system(2, &[&[(0, 2), (1, -1)]]);
        let out = maximize(&sys, &[rat(0), rat(1)]).unwrap();
        match out {
            LpOutcome::Optimal { value, vertex } => {
                assert_eq!(value, BigRational::new(BigInt::from(2), BigInt::from(3)));
                assert_eq!(vertex[0], BigRational::new(BigInt::from(1), BigInt::from(3)));
            }
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn infeasible_chain_detected_through_merges() {
        // x0 = x1, x1 = x2, x0 + x2 = 0 => everything zero => infeasible.
        let sys = system(
            3,
            &[&[(0, 1), (1, -1)], &[(1, 1), (2, -1)], &[(0, 1), (2, 1)]],
        );
        assert_eq!(
            maximize(&sys, &[rat(1), rat(1), rat(1)]).unwrap(),
            LpOutcome::Infeasible
        );
    }

    #[test]
    fn primitive_integer_scales_and_reduces() {
        let x = vec![
            BigRational::new(BigInt::from(2), BigInt::from(3)),
            BigRational::new(BigInt::from(4), BigInt::from(3)),
        ];
        assert_eq!(primitive_integer(&x), vec![BigInt::from(1), BigInt::from(2)]);
        let all_zero = vec![BigRational::zero(); 2];
        assert_eq!(primitive_integer(&all_zero), vec![BigInt::zero(); 2]);
    }

    #[test]
    fn extreme_ray_test_accepts_vertices_and_rejects_interior() {
        // Cone { x0 = x1 } in R^3: extreme rays (1,1,0) and (0,0,1).
        let sys = system(3, &[&[(0, 1), (1, -1)]]);
        let on = |v: [i64; 3]| {
            on_extreme_ray(&sys, &v.map(BigInt::from)).unwrap()
        };
        assert!(on([1, 1, 0]));
        assert!(on([0, 0, 1]));
        assert!(!on([1, 1, 1])); // interior: support spans 2 dimensions
    }

    #[test]
    fn extreme_ray_test_rejects_points_off_the_cone() {
        let sys = system(2, &[&[(0, 1), (1, -1)]]);
        assert!(matches!(
            on_extreme_ray(&sys, &[BigInt::from(1), BigInt::from(2)]),
            Err(LpError::InfeasiblePoint)
        ));
    }
}
