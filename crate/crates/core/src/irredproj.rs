//! Projection oracles: for a monic shift `alpha`, finite lists of pairs `(beta, gamma)` such
//! that every irreducible polynomial of the oracle's class stays irreducible under
//! `z -> alpha x + beta t + gamma` for at least one listed pair.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::isolation::IsolationScheme;
use crate::poly::SparsePoly;
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionPair {
    pub beta: Vec<Q>,
    pub gamma: Vec<Q>,
}

pub type PairIter<'a> = Box<dyn Iterator<Item = ProjectionPair> + Send + 'a>;

pub trait IrredProjOracle: Send + Sync {
    fn name(&self) -> String;
    /// Membership in the oracle's class.
    fn contains(&self, f: &SparsePoly) -> bool;
    /// Degree bound of the class, if it has one below the input degree.
    fn degree_bound(&self) -> Option<u32>;
    /// Whether the class guarantee holds; false for experimental oracles.
    fn is_sound(&self) -> bool {
        true
    }
    /// The pairs for `alpha`, in a fixed order.
    fn pairs<'a>(&'a self, alpha: &'a [Q]) -> Result<PairIter<'a>>;
}

/// Polynomials of degree at most `delta`: pairs `((a^{w_i}), (a^{w'_i}))` for
/// `a = 1..=D+1`, `D = 2 delta^5 max(w, w')`.
pub struct ConstantDegreeOracle {
    pub delta: u32,
    pub n: usize,
    pub scheme: IsolationScheme,
    pub bound: u64,
}

pub fn constant_degree_oracle(delta: u32, n: usize, cfg: &Config) -> Result<ConstantDegreeOracle> {
    let scheme = IsolationScheme::for_projection(n, delta, cfg)?;
    let bound = 2 * (delta as u64).pow(5) * scheme.max_weight().max(1);
    Ok(ConstantDegreeOracle { delta, n, scheme, bound })
}

fn pow_q(a: u64, e: u64) -> Q {
    Q::from_integer(num_traits::pow::pow(BigInt::from(a), e as usize))
}

impl IrredProjOracle for ConstantDegreeOracle {
    fn name(&self) -> String {
        format!("constant-degree:{}", self.delta)
    }

    fn contains(&self, f: &SparsePoly) -> bool {
        f.degree() <= self.delta
    }

    fn degree_bound(&self) -> Option<u32> {
        Some(self.delta)
    }

    fn pairs<'a>(&'a self, alpha: &'a [Q]) -> Result<PairIter<'a>> {
        if alpha.len() != self.n {
            return Err(Error::VariableCountMismatch { left: alpha.len(), right: self.n });
        }
        Ok(Box::new((1..=self.bound + 1).map(move |a| ProjectionPair {
            beta: self.scheme.w.iter().map(|&w| pow_q(a, w)).collect(),
            gamma: self.scheme.w_prime.iter().map(|&w| pow_q(a, w)).collect(),
        })))
    }
}

/// Whether every term involves at most one variable.
pub fn su_membership(f: &SparsePoly) -> bool {
    f.terms().all(|(m, _)| m.0.iter().filter(|&&e| e > 0).count() <= 1)
}

/// Irreducibility from the support alone: `Some(true)` with at least three variables,
/// `None` (undecided) otherwise.
pub fn su_is_irreducible_by_support(f: &SparsePoly) -> Result<Option<bool>> {
    if !su_membership(f) {
        return Err(Error::Config("not a sum of univariate polynomials".into()));
    }
    Ok((f.var_support().len() >= 3).then_some(true))
}

/// How an oracle walks a grid that may be too large.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridMode {
    /// Every grid point; fails when the grid exceeds the cap.
    Exhaustive { cap: u64 },
    /// The first `k` points per variable subset, in shell order. Sound but not complete.
    Sampled { k: u64 },
}

/// Sums of univariate polynomials of degree at most `d`: for every pair and every triple
/// of variables, the grid `{1..2d^5+1}^4` (resp. `^6`) placed on the chosen coordinates of
/// `(beta, gamma)`, zero elsewhere, so unchosen variables map to `alpha_l x`.
pub struct SuOracle {
    pub n: usize,
    pub d: u32,
    pub side: u64,
    pub mode: GridMode,
}

pub fn su_oracle(n: usize, d: u32, mode: GridMode) -> Result<SuOracle> {
    let side = 2 * (d as u64).pow(5) + 1;
    let o = SuOracle { n, d, side, mode };
    if let GridMode::Exhaustive { cap } = mode {
        let size = o.total_size();
        if size.map(|s| s > cap as u128).unwrap_or(true) {
            return Err(Error::Cap(format!(
                "sum-of-univariates grid for n = {n}, d = {d} has {} points, cap is {cap}",
                size.map(|s| s.to_string()).unwrap_or_else(|| "too many".into())
            )));
        }
    }
    Ok(o)
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}

impl SuOracle {
    /// `C(n,2) side^4 + C(n,3) side^6`.
    pub fn total_size(&self) -> Option<u128> {
        let s = self.side as u128;
        let a = binom(self.n, 2).checked_mul(s.checked_pow(4)?)?;
        let b = binom(self.n, 3).checked_mul(s.checked_pow(6)?)?;
        a.checked_add(b)
    }

    fn subsets(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push(vec![i, j]);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    out.push(vec![i, j, k]);
                }
            }
        }
        if n == 1 {
            out.push(vec![0]);
        }
        out
    }
}

/// Points of `{1..side}^k` by increasing maximum coordinate, lexicographic within a shell.
pub fn shell_points(k: usize, side: u64) -> impl Iterator<Item = Vec<u64>> + Send {
    (1..=side).flat_map(move |m| {
        let mut cur = vec![1u64; k];
        let mut done = k == 0;
        std::iter::from_fn(move || loop {
            if done {
                return None;
            }
            let out = cur.clone();
            // advance
            let mut i = k;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] <= m {
                    break;
                }
                cur[i] = 1;
            }
            if out.contains(&m) {
                return Some(out);
            }
        })
    })
}

impl IrredProjOracle for SuOracle {
    fn name(&self) -> String {
        "su".into()
    }

    fn contains(&self, f: &SparsePoly) -> bool {
        su_membership(f) && f.degree() <= self.d
    }

    fn degree_bound(&self) -> Option<u32> {
        Some(self.d)
    }

    fn pairs<'a>(&'a self, alpha: &'a [Q]) -> Result<PairIter<'a>> {
        if alpha.len() != self.n {
            return Err(Error::VariableCountMismatch { left: alpha.len(), right: self.n });
        }
        let limit = match self.mode {
            GridMode::Exhaustive { .. } => u64::MAX,
            GridMode::Sampled { k } => k,
        };
        let n = self.n;
        // Round robin over subsets: the i-th point of every subset before the (i+1)-th.
        let mut iters: Vec<(Vec<usize>, Box<dyn Iterator<Item = Vec<u64>> + Send>)> = self
            .subsets()
            .into_iter()
            .map(|s| {
                let k = 2 * s.len();
                let it: Box<dyn Iterator<Item = Vec<u64>> + Send> = Box::new(shell_points(k, self.side).take(limit as usize));
                (s, it)
            })
            .collect();
        let mut idx = 0usize;
        let mut live = iters.len();
        Ok(Box::new(std::iter::from_fn(move || {
            while live > 0 {
                let slot = idx % iters.len();
                idx += 1;
                let (s, it) = &mut iters[slot];
                if s.is_empty() {
                    continue;
                }
                match it.next() {
                    Some(pt) => {
                        let mut beta = vec![Q::from_integer(0.into()); n];
                        let mut gamma = beta.clone();
                        let h = s.len();
                        for (j, &v) in s.iter().enumerate() {
                            beta[v] = Q::from_integer(pt[j].into());
                            gamma[v] = Q::from_integer(pt[h + j].into());
                        }
                        return Some(ProjectionPair { beta, gamma });
                    }
                    None => {
                        s.clear();
                        live -= 1;
                    }
                }
            }
            None
        })))
    }
}

/// Random pairs from a seeded generator. Carries no guarantee; for experiments only.
pub struct RandomOracle {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub range: i64,
}

impl IrredProjOracle for RandomOracle {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn contains(&self, _f: &SparsePoly) -> bool {
        true
    }

    fn degree_bound(&self) -> Option<u32> {
        None
    }

    fn is_sound(&self) -> bool {
        false
    }

    fn pairs<'a>(&'a self, alpha: &'a [Q]) -> Result<PairIter<'a>> {
        if alpha.len() != self.n {
            return Err(Error::VariableCountMismatch { left: alpha.len(), right: self.n });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let (n, r) = (self.n, self.range);
        Ok(Box::new((0..self.count).map(move |_| ProjectionPair {
            beta: (0..n).map(|_| Q::from_integer(rng.gen_range(-r..=r).into())).collect(),
            gamma: (0..n).map(|_| Q::from_integer(rng.gen_range(-r..=r).into())).collect(),
        })))
    }
}

/// Oracle chosen from a textual descriptor: `constant-degree:<delta>`, `su`, or `su:<d>`.
pub fn parse_oracle(desc: &str, n: usize, default_d: u32, sample: Option<u64>, cfg: &Config) -> Result<Box<dyn IrredProjOracle>> {
    let (head, arg) = match desc.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (desc, None),
    };
    let num = |a: Option<&str>, dflt: Option<u32>| -> Result<u32> {
        match a {
            Some(s) => s.trim().parse().map_err(|_| Error::Config(format!("bad oracle parameter '{s}'"))),
            None => dflt.ok_or_else(|| Error::Config(format!("oracle '{head}' needs a parameter"))),
        }
    };
    match head {
        "constant-degree" | "cd" => Ok(Box::new(constant_degree_oracle(num(arg, None)?, n, cfg)?)),
        "su" => {
            let d = num(arg, Some(default_d))?;
            let mode = match sample {
                Some(k) => GridMode::Sampled { k },
                None => GridMode::Exhaustive { cap: cfg.su_oracle_cap },
            };
            Ok(Box::new(su_oracle(n, d, mode)?))
        }
        _ => Err(Error::Config(format!("unknown oracle '{desc}'"))),
    }
}
