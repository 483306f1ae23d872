//! Torus characters of the Ext bundle at fixed points and the Euler classes
//! built from them.
//!
//! `E_{μ,ν}(z1, z2)` is computed twice: from the closed form in terms of the
//! generating polynomials `Q_μ = Σ_{(i,j)∈μ} z1^{j−1} z2^{i−1}`, and from the
//! arm/leg sum over boxes. After specializing `z1 = z`, `z2 = z^{-1}` there is
//! a third route through the beta-set generating functions `f_μ`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{euler_eval, int, monomial_weight, LaurentPoly, ParamPoint, Rat};
use crate::partitions::{Partition, RTuple};

/// Variables of rank-one characters.
pub const PAIR_VARS: [&str; 2] = ["z1", "z2"];
/// Variable of specialized characters.
pub const SPECIAL_VAR: [&str; 1] = ["z"];

/// `Q_μ = Σ_{s∈μ} z1^{col−1} z2^{row−1}`, the character of `C[x,y]/I_μ`.
pub fn box_character(mu: &Partition) -> LaurentPoly {
    let mut q = LaurentPoly::zero(&PAIR_VARS);
    for s in mu.boxes() {
        q.add_term(vec![s.col as i64 - 1, s.row as i64 - 1], 1);
    }
    q
}

/// `E_{μ,ν} = z1^{-1}z2^{-1}·conj(Q_μ) + conj(1 − M·Q_μ)·Q_ν` with `M = (1−z1)(1−z2)`.
pub fn e_pair_closed(mu: &Partition, nu: &Partition) -> LaurentPoly {
    let v = &PAIR_VARS;
    let one = LaurentPoly::one(v);
    let m = one
        .sub(&LaurentPoly::monomial(v, &[1, 0], 1))
        .mul(&one.sub(&LaurentPoly::monomial(v, &[0, 1], 1)));
    let q_mu = box_character(mu);
    let q_nu = box_character(nu);
    LaurentPoly::monomial(v, &[-1, -1], 1)
        .mul(&q_mu.conjugate())
        .add(&one.sub(&m.mul(&q_mu)).conjugate().mul(&q_nu))
}

/// `Σ_{s∈μ} z1^{−a_μ(s)−1} z2^{l_ν(s)} + Σ_{s∈ν} z1^{a_ν(s)} z2^{−l_μ(s)−1}`.
pub fn e_pair_hooks(mu: &Partition, nu: &Partition) -> LaurentPoly {
    let mut e = LaurentPoly::zero(&PAIR_VARS);
    for s in mu.boxes() {
        e.add_term(vec![-mu.arm(s) - 1, nu.leg(s)], 1);
    }
    for s in nu.boxes() {
        e.add_term(vec![nu.arm(s), -mu.leg(s) - 1], 1);
    }
    e
}

fn framing_vars(prefix: &[&str], r: usize) -> Vec<String> {
    let mut vars: Vec<String> = prefix.iter().map(|s| s.to_string()).collect();
    vars.extend((1..=r).map(|i| format!("w{i}")));
    vars.extend((1..=r).map(|j| format!("v{j}")));
    vars
}

fn as_strs(vars: &[String]) -> Vec<&str> {
    vars.iter().map(String::as_str).collect()
}

/// Assembles `Σ_{i,j} w_i^{-1} v_j · pair(μ^(i), ν^(j))` over the torus
/// variables `torus` followed by `w_1..w_r, v_1..v_r`.
fn assemble_ranked(
    mus: &RTuple,
    nus: &RTuple,
    torus: &[&str],
    pair: impl Fn(&Partition, &Partition) -> LaurentPoly,
) -> LaurentPoly {
    let r = mus.rank();
    assert_eq!(r, nus.rank(), "tuples of different rank");
    let vars = framing_vars(torus, r);
    let vars = as_strs(&vars);
    let nt = torus.len();
    let mut out = LaurentPoly::zero(&vars);
    for (i, mu) in mus.entries().iter().enumerate() {
        for (j, nu) in nus.entries().iter().enumerate() {
            let piece = pair(mu, nu).map_monomials(&vars, |e| {
                let mut x = vec![0; nt + 2 * r];
                x[..nt].copy_from_slice(e);
                x[nt + i] -= 1;
                x[nt + r + j] += 1;
                x
            });
            out = out.add(&piece);
        }
    }
    out
}

/// `E_{𝛍,𝛎}(z1, z2, 𝐰, 𝐯) = Σ_{i,j} w_i^{-1} v_j E_{μ^(i),ν^(j)}(z1, z2)`.
pub fn e_ranked(mus: &RTuple, nus: &RTuple) -> LaurentPoly {
    assemble_ranked(mus, nus, &PAIR_VARS, e_pair_hooks)
}

/// `E_{𝛍,𝛎}(z, 𝐰, 𝐯)` after `z1 = z`, `z2 = z^{-1}`.
pub fn e_ranked_specialized(mus: &RTuple, nus: &RTuple) -> LaurentPoly {
    assemble_ranked(mus, nus, &SPECIAL_VAR, specialize_pair)
}

fn specialize_pair(mu: &Partition, nu: &Partition) -> LaurentPoly {
    e_pair_hooks(mu, nu).map_monomials(&SPECIAL_VAR, |e| vec![e[0] - e[1]])
}

/// `f_μ(z) = Σ_{i≥1} z^{μ_i−i+1}`, held as a finite part plus the geometric
/// tail `z^{−len}/(1 − z^{−1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaGenerating {
    pub finite: LaurentPoly,
    pub tail_len: usize,
}

/// `f_μ` with the first `len ≥ ℓ(μ)` terms written out.
pub fn f_mu(mu: &Partition, len: usize) -> Result<BetaGenerating> {
    if len < mu.len() {
        return Err(Error::InvalidInput(format!("f_mu needs len ≥ ℓ({mu})")));
    }
    let mut finite = LaurentPoly::zero(&SPECIAL_VAR);
    for b in mu.beta_set(len, 0) {
        finite.add_term(vec![b], 1);
    }
    Ok(BetaGenerating { finite, tail_len: len })
}

/// Exact quotient `p / (z − 1)` of a one-variable Laurent polynomial.
fn divide_by_z_minus_one(p: &LaurentPoly) -> Result<LaurentPoly> {
    let mut quotient = LaurentPoly::zero(&SPECIAL_VAR);
    if p.is_zero() {
        return Ok(quotient);
    }
    let exps: Vec<i64> = p.terms().map(|(e, _)| e[0]).collect();
    let (lo, hi) = (exps[0], *exps.last().unwrap());
    // p = (z − 1)q, so q_{e−1} = p_e + q_e going down from the top.
    let mut carry = 0i64;
    for e in (lo + 1..=hi).rev() {
        carry += p.coeff(&[e]);
        quotient.add_term(vec![e - 1], carry);
    }
    let back = quotient.mul(&LaurentPoly::monomial(&SPECIAL_VAR, &[1], 1).sub(&LaurentPoly::one(&SPECIAL_VAR)));
    if back != *p {
        return Err(Error::TailMismatch(format!("{p} is not divisible by z − 1")));
    }
    Ok(quotient)
}

/// `E_{μ,ν}(z) = f_∅(z^{-1}) f_∅(z) − f_μ(z^{-1}) f_ν(z)` with the tails cancelled exactly.
///
/// With a common truncation `L`, `f_μ(z^{-1}) f_ν(z)` equals
/// `P̄_μ P_ν + (P̄_μ z^{1−L} − z^L P_ν)/(z−1) − z/(z−1)²`, so the double pole
/// drops out of the difference and the simple pole must divide exactly.
pub fn e_pair_from_beta(mu: &Partition, nu: &Partition) -> Result<LaurentPoly> {
    let len = mu.len().max(nu.len());
    let empty = f_mu(&Partition::empty(), len)?.finite;
    let fm = f_mu(mu, len)?.finite;
    let fn_ = f_mu(nu, len)?.finite;
    let v = &SPECIAL_VAR;
    let polar = empty.conjugate().mul(&empty).sub(&fm.conjugate().mul(&fn_));
    let down = LaurentPoly::monomial(v, &[1 - len as i64], 1);
    let up = LaurentPoly::monomial(v, &[len as i64], 1);
    let numerator = empty
        .conjugate()
        .sub(&fm.conjugate())
        .mul(&down)
        .sub(&up.mul(&empty.sub(&fn_)));
    Ok(polar.add(&divide_by_z_minus_one(&numerator)?))
}

/// Specialized rank-one character, computed by substitution and by the
/// beta-set route; the two must agree.
pub fn e_specialized(mu: &Partition, nu: &Partition) -> Result<LaurentPoly> {
    let substituted = specialize_pair(mu, nu);
    let from_beta = e_pair_from_beta(mu, nu)?;
    if substituted != from_beta {
        return Err(Error::CrossCheckFailure {
            what: format!("specialized character E_{{{mu},{nu}}}(z)"),
            left: substituted.to_string(),
            right: from_beta.to_string(),
        });
    }
    Ok(substituted)
}

fn framing_point(t_params: &[(&str, &Rat)], a: &[Rat], b: &[Rat]) -> ParamPoint {
    let mut pt = ParamPoint::new();
    for (name, value) in t_params {
        pt.set(name, (*value).clone());
    }
    for (i, ai) in a.iter().enumerate() {
        pt.set(&format!("a{}", i + 1), ai.clone());
    }
    for (j, bj) in b.iter().enumerate() {
        pt.set(&format!("b{}", j + 1), bj.clone());
    }
    pt
}

fn check_rank(mus: &RTuple, a: &[Rat], nus: &RTuple, b: &[Rat]) -> Result<()> {
    let r = mus.rank();
    if nus.rank() != r || a.len() != r || b.len() != r {
        return Err(Error::InvalidInput("tuples and framing parameters must share the rank".into()));
    }
    Ok(())
}

/// `w_{𝛍,𝛎}(𝐚, 𝐛, m) = e_m(E_{𝛍,𝛎}(z, 𝐰, 𝐯))` on the torus `t1 = t, t2 = −t`.
pub fn w_weight(mus: &RTuple, nus: &RTuple, a: &[Rat], b: &[Rat], m: &Rat, t: &Rat) -> Result<Rat> {
    check_rank(mus, a, nus, b)?;
    let pt = framing_point(&[("t", t)], a, b);
    euler_eval(&e_ranked_specialized(mus, nus), &pt, m)
}

/// `e_m(E_{𝛍,𝛎}(z1, z2, 𝐰, 𝐯))` for independent `t1, t2`.
pub fn w_weight_general(
    mus: &RTuple,
    nus: &RTuple,
    a: &[Rat],
    b: &[Rat],
    m: &Rat,
    t1: &Rat,
    t2: &Rat,
) -> Result<Rat> {
    check_rank(mus, a, nus, b)?;
    let pt = framing_point(&[("t1", t1), ("t2", t2)], a, b);
    euler_eval(&e_ranked(mus, nus), &pt, m)
}

/// How the square root of a diagonal weight picks one factor from each
/// `±` pair of tangent weights.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SignConvention {
    /// Keep the factors that are positive at the evaluation point.
    #[default]
    PositiveAtPoint,
    /// Keep the factors whose linear form `αt + a_j − a_i` has positive
    /// leading coefficient in the order `t, a_1, a_2, …`.
    LeadingForm,
}

/// Square root `w_𝛍(𝐚)` of the diagonal weight:
/// `w_{𝛍,𝛍}(𝐚, 𝐚, 0) = (−1)^{r|𝛍|} w_𝛍(𝐚)²`.
pub fn half_weight(mus: &RTuple, a: &[Rat], t: &Rat, convention: SignConvention) -> Result<Rat> {
    check_rank(mus, a, mus, a)?;
    let r = mus.rank();
    let chi = e_ranked_specialized(mus, mus);
    let pt = framing_point(&[("t", t)], a, a);
    let zero = Rat::zero();
    let mut acc = Rat::one();
    for (e, c) in chi.terms() {
        let w = monomial_weight(chi.vars(), e, &pt, &zero)?;
        if w.is_zero() {
            return Err(Error::DegenerateParameters(format!(
                "zero tangent weight at {mus} with a = {a:?}"
            )));
        }
        let keep = match convention {
            SignConvention::PositiveAtPoint => w.is_positive(),
            SignConvention::LeadingForm => {
                let alpha = e[0];
                let i = e[1..=r].iter().position(|&x| x == -1);
                let j = e[r + 1..].iter().position(|&x| x == 1);
                match alpha.cmp(&0) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => i > j,
                }
            }
        };
        if keep {
            for _ in 0..c {
                acc *= &w;
            }
        }
    }
    Ok(acc)
}

/// `(−1)^n` as a rational.
pub fn sign(n: u64) -> Rat {
    if n.is_multiple_of(2) {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// Hook product of `μ` times `t^{|μ|}`, the rank-one half weight for `t > 0`.
pub fn hook_half_weight(mu: &Partition, t: &Rat) -> Rat {
    let mut acc = int(mu.hook_product() as i64);
    for _ in 0..mu.size() {
        acc *= t;
    }
    acc
}
