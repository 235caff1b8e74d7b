//! Section representations of the distinguished variables and the exact
//! expansion of monomials into coordinate vectors.

use crate::ratlin::{zeros, QVec, Rat};

use super::{Axis, CurveModel, ModelKind, Monomial};

/// Per-variable section data, in the trivialization fixed by the model.
#[derive(Debug, Clone)]
pub(crate) enum Section {
    /// `u^d + c·u^{d'}ε` on the ribbon chart (`c = 0` for the pure powers).
    Ribbon { u_deg: u32, eps: Option<(u32, i64)> },
    /// Laurent monomial with unit coefficient on each supported component,
    /// relative to the frame `(du/u)^w`; zero elsewhere.
    Laurent(Vec<(usize, i64)>),
    /// `z^d w^e` with `e ∈ {0,1}`.
    Wiman { z: u32, w: bool },
}

impl CurveModel {
    /// Coordinate axes of the degree-`m` coordinatization, with their torus
    /// weights (characters mod `4g+2` in the Wiman case).
    pub(super) fn build_axes(&self, m: u32) -> Vec<Axis> {
        let g = self.g as i64;
        let m_i = m as i64;
        match self.kind {
            ModelKind::Ribbon => {
                let k = self.k_param() as i64;
                let top = 2 * m_i * k;
                let mut axes = Vec::new();
                for d in 0..=top {
                    axes.push(Axis {
                        label: format!("u^{d}"),
                        weight: d - m_i * k,
                    });
                }
                for d in 0..=(top - k - 1).max(-1) {
                    axes.push(Axis {
                        label: format!("u^{d}e"),
                        weight: d + k + 1 - m_i * k,
                    });
                }
                axes
            }
            ModelKind::DoubleA => {
                let k = self.k_param() as i64;
                let mut axes = Vec::new();
                for j in m_i..=(m_i * k) {
                    axes.push(Axis {
                        label: format!("omega_{j}"),
                        weight: j,
                    });
                }
                for j in m_i..=(m_i * k) {
                    axes.push(Axis {
                        label: format!("eta_{j}"),
                        weight: -j,
                    });
                }
                for l in (-k * (m_i - 1) + 1)..=(k * (m_i - 1) - 1) {
                    axes.push(Axis {
                        label: format!("chi_{l}"),
                        weight: -l,
                    });
                }
                axes
            }
            ModelKind::RosaryCanonical | ModelKind::RosaryBicanonical => {
                let w = self.laurent_halfwidth(m) as i64;
                let ncomp = (g - 1) as usize;
                let mut axes = Vec::new();
                for c in 0..ncomp {
                    let sign = if c % 2 == 0 { 1 } else { -1 };
                    for e in -w..=w {
                        axes.push(Axis {
                            label: format!("C{c}:u^{e}"),
                            weight: sign * e,
                        });
                    }
                }
                axes
            }
            ModelKind::Wiman => {
                let modulus = 4 * g + 2;
                let char_of = |d: i64, e: i64| -> i64 {
                    (2 * d + e * (2 * g + 1) + 4 * m_i - 2 * m_i * (2 * g + 1))
                        .rem_euclid(modulus)
                };
                let mut axes = Vec::new();
                for d in 0..=((2 * g - 2) * m_i) {
                    axes.push(Axis {
                        label: format!("z^{d}"),
                        weight: char_of(d, 0),
                    });
                }
                for d in 0..=((2 * g - 2) * (m_i - 1) + (g - 3)) {
                    axes.push(Axis {
                        label: format!("z^{d}w"),
                        weight: char_of(d, 1),
                    });
                }
                axes
            }
        }
    }

    /// Laurent window half-width per component: `m` for the canonical rosary,
    /// `2m` for the bicanonical one.
    pub(super) fn laurent_halfwidth(&self, m: u32) -> u32 {
        match self.kind {
            ModelKind::RosaryCanonical => m,
            ModelKind::RosaryBicanonical => 2 * m,
            _ => unreachable!("laurent window only defined for rosaries"),
        }
    }

    /// Exact image of a monomial in the degree-`m` coordinatization, where
    /// `m` is the monomial's degree.
    pub fn expand(&self, mono: &Monomial) -> super::SectionVector {
        let m = mono.degree();
        assert!(m >= 1, "expand requires degree >= 1");
        assert_eq!(mono.num_vars(), self.vars.len(), "variable count mismatch");
        let axes_len = self.degree_ctx(m).axes.len();
        let coords = match self.kind {
            ModelKind::Ribbon => self.expand_ribbon(mono, m, axes_len),
            ModelKind::DoubleA => self.expand_double_a(mono, m, axes_len),
            ModelKind::RosaryCanonical | ModelKind::RosaryBicanonical => {
                self.expand_rosary(mono, m, axes_len)
            }
            ModelKind::Wiman => self.expand_wiman(mono, m, axes_len),
        };
        super::SectionVector { coords }
    }

    fn expand_ribbon(&self, mono: &Monomial, m: u32, axes_len: usize) -> QVec {
        let k = self.k_param() as usize;
        let top = 2 * (m as usize) * k;
        // Polynomial multiplication in C[u, eps]/(eps^2); the closed-form
        // route is kept test-side as an independent oracle.
        let mut fun = vec![Rat::zero(); top + 1];
        let mut eps = vec![Rat::zero(); top + 1];
        fun[0] = Rat::one();
        for (v, e) in mono.iter_factors() {
            let Section::Ribbon { u_deg, eps: eterm } = &self.sections[v] else {
                unreachable!()
            };
            for _ in 0..e {
                let d = *u_deg as usize;
                let mut nfun = vec![Rat::zero(); top + 1];
                let mut neps = vec![Rat::zero(); top + 1];
                for (i, c) in fun.iter().enumerate() {
                    if !c.is_zero() {
                        nfun[i + d] += c;
                    }
                }
                for (i, c) in eps.iter().enumerate() {
                    if !c.is_zero() {
                        neps[i + d] += c;
                    }
                }
                if let Some((ed, ec)) = eterm {
                    let ec = Rat::int(*ec);
                    for (i, c) in fun.iter().enumerate() {
                        if !c.is_zero() {
                            neps[i + *ed as usize] += c * &ec;
                        }
                    }
                }
                fun = nfun;
                eps = neps;
            }
        }
        let eps_top = top as i64 - k as i64 - 1;
        let mut coords = zeros(axes_len);
        for (d, c) in fun.into_iter().enumerate() {
            coords[d] = c;
        }
        for (d, c) in eps.into_iter().enumerate() {
            if !c.is_zero() {
                assert!(
                    (d as i64) <= eps_top,
                    "ribbon eps coordinate outside declared window"
                );
                coords[top + 1 + d] = c;
            }
        }
        coords
    }

    fn expand_double_a(&self, mono: &Monomial, m: u32, axes_len: usize) -> QVec {
        let k = self.k_param() as i64;
        let m = m as i64;
        let prod = self.laurent_product(mono, 3);
        let mut coords = zeros(axes_len);
        let n_omega = (m * k - m + 1) as usize;
        match prod.as_slice() {
            // all factors pure x: supported on components 0 and 1
            [(0, j), (1, nj)] => {
                assert_eq!(*nj, -j, "scroll balance violated");
                assert!((m..=m * k).contains(j), "omega index outside window");
                coords[(j - m) as usize] = Rat::one();
            }
            // all factors pure y: supported on components 1 and 2
            [(1, j), (2, nj)] => {
                assert_eq!(*nj, -j);
                assert!((m..=m * k).contains(j), "eta index outside window");
                coords[n_omega + (j - m) as usize] = Rat::one();
            }
            // mixed: middle component only
            [(1, l)] => {
                let lo = -k * (m - 1) + 1;
                let hi = k * (m - 1) - 1;
                assert!((lo..=hi).contains(l), "chi index outside window");
                coords[2 * n_omega + (l - lo) as usize] = Rat::one();
            }
            other => unreachable!("unexpected double-A support pattern {other:?}"),
        }
        coords
    }

    fn expand_rosary(&self, mono: &Monomial, m: u32, axes_len: usize) -> QVec {
        let ncomp = (self.g - 1) as usize;
        let w = self.laurent_halfwidth(m) as i64;
        let prod = self.laurent_product(mono, ncomp);
        let mut coords = zeros(axes_len);
        for (c, e) in prod {
            assert!((-w..=w).contains(&e), "rosary Laurent degree outside window");
            coords[c * (2 * w as usize + 1) + (e + w) as usize] = Rat::one();
        }
        coords
    }

    /// Componentwise product of component-supported Laurent monomials: the
    /// product vanishes on a component unless every factor is supported there.
    fn laurent_product(&self, mono: &Monomial, ncomp: usize) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        'comp: for c in 0..ncomp {
            let mut exp = 0i64;
            for (v, e) in mono.iter_factors() {
                let Section::Laurent(supp) = &self.sections[v] else {
                    unreachable!()
                };
                match supp.iter().find(|(sc, _)| *sc == c) {
                    Some((_, se)) => exp += se * e as i64,
                    None => continue 'comp,
                }
            }
            out.push((c, exp));
        }
        out
    }

    fn expand_wiman(&self, mono: &Monomial, m: u32, axes_len: usize) -> QVec {
        let g = self.g as usize;
        let top0 = (2 * g - 2) * m as usize;
        let top1 = (2 * g - 2) * (m as usize - 1) + g - 3;
        // (p0, p1) are the w^0 and w^1 parts; multiplication by y shifts and
        // applies the hyperelliptic relation w^2 = z^(2g+1) + 1.
        let mut p0: Vec<Rat> = vec![Rat::one()];
        let mut p1: Vec<Rat> = Vec::new();
        let shift = |p: &[Rat], s: usize| -> Vec<Rat> {
            let mut out = vec![Rat::zero(); p.len() + s];
            for (i, c) in p.iter().enumerate() {
                out[i + s] = c.clone();
            }
            out
        };
        let add = |a: &mut Vec<Rat>, b: Vec<Rat>| {
            if a.len() < b.len() {
                a.resize(b.len(), Rat::zero());
            }
            for (i, c) in b.into_iter().enumerate() {
                a[i] += c;
            }
        };
        for (v, e) in mono.iter_factors() {
            let Section::Wiman { z, w } = &self.sections[v] else {
                unreachable!()
            };
            for _ in 0..e {
                let z = *z as usize;
                if !*w {
                    p0 = shift(&p0, z);
                    p1 = shift(&p1, z);
                } else {
                    // (p0 + p1 w) * z^z w  =  p1 z^z (z^(2g+1)+1)  +  p0 z^z w
                    let mut n0 = shift(&p1, z + 2 * g + 1);
                    add(&mut n0, shift(&p1, z));
                    let n1 = shift(&p0, z);
                    p0 = n0;
                    p1 = n1;
                }
            }
        }
        let mut coords = zeros(axes_len);
        for (d, c) in p0.into_iter().enumerate() {
            if !c.is_zero() {
                assert!(d <= top0, "wiman z-degree outside window");
                coords[d] = c;
            }
        }
        for (d, c) in p1.into_iter().enumerate() {
            if !c.is_zero() {
                assert!(d <= top1, "wiman zw-degree outside window");
                coords[top0 + 1 + d] = c;
            }
        }
        coords
    }
}
