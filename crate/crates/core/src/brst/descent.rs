//! Descent chains `s φ_k + d_H φ_{k-1} = ϕ_k` starting from a top form.

use crate::brst::s_operator;
use crate::brst::solve::{dh_solve, DhOutcome};
use crate::error::Result;
use crate::forms::Form;
use crate::kernel::Dir;
use crate::symmetry::SuperSymmetry;

/// `forms[k] = φ_k` and `rhs[k] = ϕ_k` for `k = 0..=n`; `ϕ_n` is always zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentChain {
    pub n: Dir,
    pub forms: Vec<Form>,
    pub rhs: Vec<Form>,
}

impl DescentChain {
    pub fn zero(n: Dir) -> Self {
        DescentChain {
            n,
            forms: vec![Form::zero(); n as usize + 1],
            rhs: vec![Form::zero(); n as usize + 1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentOutcome {
    pub chain: DescentChain,
    /// Lowest degree reached; 0 for a complete chain.
    pub reached: usize,
    pub diagnostic: Option<String>,
}

impl DescentOutcome {
    pub fn complete(&self) -> bool {
        self.diagnostic.is_none()
    }
}

/// Solves the descent equations downward from `φ_n`. Closed polynomial base
/// forms of positive degree are exact on `ℝⁿ`, so every `ϕ_k` with `k > 0` is
/// zero and only `ϕ_0 = s φ_0` can survive, as a constant.
pub fn descent_solve(u: &SuperSymmetry, phi_n: &Form, bound: usize) -> Result<DescentOutcome> {
    let n = u.n();
    let mut chain = DescentChain::zero(n);
    chain.forms[n as usize] = phi_n.clone();
    for k in (1..=n as usize).rev() {
        let target = -s_operator(u, &chain.forms[k])?;
        let outcome = if target.is_zero() {
            DhOutcome::Solved {
                sigma: Form::zero(),
                level: 0,
            }
        } else {
            dh_solve(&target, n, bound)?
        };
        match outcome {
            DhOutcome::Solved { sigma, .. } => chain.forms[k - 1] = sigma,
            DhOutcome::Obstruction { reason, .. } => {
                return Ok(DescentOutcome {
                    chain,
                    reached: k,
                    diagnostic: Some(format!("s φ_{} is not d_H-exact: {}", k, reason)),
                })
            }
            DhOutcome::Undecided { bound } => {
                return Ok(DescentOutcome {
                    chain,
                    reached: k,
                    diagnostic: Some(format!("undecided at bound {} for degree {}", bound, k - 1)),
                })
            }
        }
    }
    let last = s_operator(u, &chain.forms[0])?;
    let constant = last.function_part().as_constant().is_some() && last.degrees().iter().all(|d| *d == (0, 0));
    chain.rhs[0] = last;
    let diagnostic = (!constant).then(|| "s φ_0 is not constant".to_string());
    Ok(DescentOutcome {
        chain,
        reached: 0,
        diagnostic,
    })
}

/// Residuals `s φ_k + d_H φ_{k-1} - ϕ_k` for `k = n..1`, then `s φ_0 - ϕ_0`.
pub fn descent_verify(u: &SuperSymmetry, chain: &DescentChain) -> Result<Vec<(usize, Form)>> {
    let n = chain.n as usize;
    let mut out = Vec::with_capacity(n + 1);
    for k in (0..=n).rev() {
        let mut r = s_operator(u, &chain.forms[k])?;
        if k > 0 {
            r += &chain.forms[k - 1].d_h(chain.n);
        }
        r -= &chain.rhs[k];
        out.push((k, r));
    }
    Ok(out)
}
