//! Depolarizing Kraus sets for the qubit, the qutrit and the composite system,
//! and their application to density matrices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::check_range;
use crate::linalg::{omega, Matrix, ONE, ZERO};
use crate::states;
use crate::{Error, Result};

/// Positivity / trace tolerance applied to channel inputs.
pub const DENSITY_TOL: f64 = 1e-10;

/// Ordered Kraus operators of a channel on a `dim`-dimensional space.
#[derive(Debug, Clone)]
pub struct KrausSet {
    operators: Vec<Matrix>,
    dim: usize,
    noise_param: f64,
    label: String,
}

impl KrausSet {
    fn new(operators: Vec<Matrix>, noise_param: f64, label: impl Into<String>) -> Self {
        let dim = operators[0].rows();
        debug_assert!(operators.iter().all(|e| e.dims() == (dim, dim)));
        Self {
            operators,
            dim,
            noise_param,
            label: label.into(),
        }
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn noise_param(&self) -> f64 {
        self.noise_param
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `max |sum_i E_i^H E_i - I|`.
    pub fn completeness_defect(&self) -> f64 {
        let mut acc = Matrix::zeros(self.dim, self.dim);
        for e in &self.operators {
            acc = acc
                .add(&e.adjoint().matmul(e).expect("square operators"))
                .expect("same dimension");
        }
        acc.max_abs_diff(&Matrix::identity(self.dim))
            .expect("same dimension")
    }
}

/// Pauli matrices `sigma_0 .. sigma_3`.
pub fn pauli(index: usize) -> Matrix {
    let i = num_complex::Complex64::new(0.0, 1.0);
    let entries = match index {
        0 => vec![ONE, ZERO, ZERO, ONE],
        1 => vec![ZERO, ONE, ONE, ZERO],
        2 => vec![ZERO, -i, i, ZERO],
        3 => vec![ONE, ZERO, ZERO, -ONE],
        _ => panic!("Pauli index {index} out of range"),
    };
    Matrix::new(2, 2, entries).expect("2x2")
}

/// The shift `Y` and clock `Z = diag(1, w, w^2)` generators on the qutrit.
pub fn weyl_generators() -> (Matrix, Matrix) {
    let y = Matrix::from_real(3, 3, &[0., 1., 0., 0., 0., 1., 1., 0., 0.]).expect("3x3");
    let w = omega();
    let z = Matrix::diag(&[ONE, w, w * w]);
    (y, z)
}

/// The eight non-identity Weyl unitaries in Kraus order:
/// `Y, Z, Y^2, YZ, Y^2 Z, Y Z^2, Y^2 Z^2, Z^2`.
pub fn weyl_unitaries() -> Vec<Matrix> {
    let (y, z) = weyl_generators();
    let mm = |a: &Matrix, b: &Matrix| a.matmul(b).expect("3x3");
    let y2 = mm(&y, &y);
    let z2 = mm(&z, &z);
    vec![
        y.clone(),
        z.clone(),
        y2.clone(),
        mm(&y, &z),
        mm(&y2, &z),
        mm(&y, &z2),
        mm(&y2, &z2),
        z2,
    ]
}

/// `{sqrt(1-p) s0, sqrt(p/3) s1, sqrt(p/3) s2, sqrt(p/3) s3}`.
pub fn qubit_depolarizing_kraus(p: f64) -> Result<KrausSet> {
    let p = check_range("p", p, 0.0, 1.0)?;
    let mut ops = vec![pauli(0).scale_real((1.0 - p).sqrt())];
    let w = (p / 3.0).sqrt();
    ops.extend((1..4).map(|k| pauli(k).scale_real(w)));
    Ok(KrausSet::new(ops, p, "qubit-depolarizing"))
}

/// `{sqrt(1-p) I3} + {sqrt(p/8) U}` over the eight non-identity Weyl unitaries.
pub fn qutrit_depolarizing_kraus(p: f64) -> Result<KrausSet> {
    let p = check_range("p", p, 0.0, 1.0)?;
    let mut ops = vec![Matrix::identity(3).scale_real((1.0 - p).sqrt())];
    let w = (p / 8.0).sqrt();
    ops.extend(weyl_unitaries().into_iter().map(|u| u.scale_real(w)));
    Ok(KrausSet::new(ops, p, "qutrit-depolarizing"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Qubit,
    Qutrit,
}

/// Embeds a single-subsystem Kraus set into the 6-dimensional composite space:
/// `E -> E (x) I3` on the qubit side, `E -> s0 (x) E` on the qutrit side.
pub fn lift_to_composite(set: &KrausSet, side: Side) -> Result<KrausSet> {
    let (expected, label) = match side {
        Side::Qubit => (2, "lifted-qubit"),
        Side::Qutrit => (3, "lifted-qutrit"),
    };
    if set.dim() != expected {
        return Err(Error::DimensionMismatch {
            op: "lift_to_composite",
            left: (set.dim(), set.dim()),
            right: (expected, expected),
        });
    }
    let ops = set
        .operators()
        .iter()
        .map(|e| match side {
            Side::Qubit => e.kron(&Matrix::identity(3)),
            Side::Qutrit => pauli(0).kron(e),
        })
        .collect();
    Ok(KrausSet::new(ops, set.noise_param(), label))
}

/// The 36 product operators `E^A_m (x) E^B_n`, both factors at the same `p`.
pub fn collective_kraus(p: f64) -> Result<KrausSet> {
    let a = qubit_depolarizing_kraus(p)?;
    let b = qutrit_depolarizing_kraus(p)?;
    let ops = a
        .operators()
        .iter()
        .flat_map(|ea| b.operators().iter().map(move |eb| ea.kron(eb)))
        .collect();
    Ok(KrausSet::new(ops, p, "collective"))
}

/// `rho' = sum_i E_i rho E_i^H`.
pub fn apply_channel(rho: &Matrix, set: &KrausSet) -> Result<Matrix> {
    if rho.dims() != (set.dim(), set.dim()) {
        return Err(Error::DimensionMismatch {
            op: "apply_channel",
            left: rho.dims(),
            right: (set.dim(), set.dim()),
        });
    }
    states::check_density(rho, DENSITY_TOL)?;
    Ok(apply_unchecked(rho, set))
}

fn apply_unchecked(rho: &Matrix, set: &KrausSet) -> Matrix {
    let mut out = Matrix::zeros(set.dim(), set.dim());
    for e in set.operators() {
        if e.entries().iter().all(|z| *z == ZERO) {
            continue;
        }
        let term = e
            .matmul(rho)
            .and_then(|m| m.matmul(&e.adjoint()))
            .expect("conformable");
        out = out.add(&term).expect("same dimension");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NoiseKind {
    #[serde(rename = "qubit")]
    QubitLocal,
    #[serde(rename = "qutrit")]
    QutritLocal,
    #[serde(rename = "multilocal")]
    Multilocal,
    #[serde(rename = "collective")]
    Collective,
    #[serde(rename = "global")]
    Global,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 5] = [
        NoiseKind::QubitLocal,
        NoiseKind::QutritLocal,
        NoiseKind::Multilocal,
        NoiseKind::Collective,
        NoiseKind::Global,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::QubitLocal => "qubit",
            NoiseKind::QutritLocal => "qutrit",
            NoiseKind::Multilocal => "multilocal",
            NoiseKind::Collective => "collective",
            NoiseKind::Global => "global",
        }
    }

    /// Whether the kind carries the given decoherence parameter.
    pub fn uses(self, param: Param) -> bool {
        matches!(
            (self, param),
            (NoiseKind::QubitLocal, Param::P1)
                | (NoiseKind::QutritLocal, Param::P2)
                | (NoiseKind::Multilocal, Param::P1 | Param::P2)
                | (NoiseKind::Collective, Param::P)
                | (NoiseKind::Global, _)
        )
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NoiseKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown scenario '{s}'")))
    }
}

/// One of the three decoherence parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    P1,
    P2,
    P,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::P1 => "p1",
            Param::P2 => "p2",
            Param::P => "p",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p1" => Ok(Param::P1),
            "p2" => Ok(Param::P2),
            "p" => Ok(Param::P),
            _ => Err(Error::Unsupported(format!("unknown parameter '{s}'"))),
        }
    }
}

/// Which environment couplings are active, with their strengths.
///
/// `p1` is the qubit-local parameter, `p2` the qutrit-local one and `p` the
/// collective one. Parameters the kind does not use are always zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseScenario {
    kind: NoiseKind,
    p1: f64,
    p2: f64,
    p: f64,
}

impl NoiseScenario {
    pub fn new(kind: NoiseKind, p1: f64, p2: f64, p: f64) -> Result<Self> {
        for (param, value) in [(Param::P1, p1), (Param::P2, p2), (Param::P, p)] {
            check_range(param.name(), value, 0.0, 1.0)?;
            if !kind.uses(param) && value != 0.0 {
                return Err(Error::Unsupported(format!(
                    "{kind} scenario does not use {param} (got {value})"
                )));
            }
        }
        Ok(Self { kind, p1, p2, p })
    }

    pub fn qubit_local(p1: f64) -> Result<Self> {
        Self::new(NoiseKind::QubitLocal, p1, 0.0, 0.0)
    }

    pub fn qutrit_local(p2: f64) -> Result<Self> {
        Self::new(NoiseKind::QutritLocal, 0.0, p2, 0.0)
    }

    pub fn multilocal(p1: f64, p2: f64) -> Result<Self> {
        Self::new(NoiseKind::Multilocal, p1, p2, 0.0)
    }

    pub fn collective(p: f64) -> Result<Self> {
        Self::new(NoiseKind::Collective, 0.0, 0.0, p)
    }

    pub fn global(p1: f64, p2: f64, p: f64) -> Result<Self> {
        Self::new(NoiseKind::Global, p1, p2, p)
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::P1 => self.p1,
            Param::P2 => self.p2,
            Param::P => self.p,
        }
    }

    /// Copy with one parameter replaced, validated against the kind.
    pub fn with(&self, param: Param, value: f64) -> Result<Self> {
        let mut s = *self;
        match param {
            Param::P1 => s.p1 = value,
            Param::P2 => s.p2 = value,
            Param::P => s.p = value,
        }
        Self::new(s.kind, s.p1, s.p2, s.p)
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p == 0.0
    }
}

/// Applies the scenario's stages in order: lifted qubit channel (`p1`), lifted
/// qutrit channel (`p2`), collective channel (`p`). Stages with a zero
/// parameter are skipped.
pub fn evolve(scenario: &NoiseScenario, rho: &Matrix) -> Result<Matrix> {
    if rho.dims() != (6, 6) {
        return Err(Error::DimensionMismatch {
            op: "evolve",
            left: rho.dims(),
            right: (6, 6),
        });
    }
    states::check_density(rho, DENSITY_TOL)?;
    let mut out = rho.clone();
    if scenario.p1 > 0.0 {
        let set = lift_to_composite(&qubit_depolarizing_kraus(scenario.p1)?, Side::Qubit)?;
        out = apply_unchecked(&out, &set);
    }
    if scenario.p2 > 0.0 {
        let set = lift_to_composite(&qutrit_depolarizing_kraus(scenario.p2)?, Side::Qutrit)?;
        out = apply_unchecked(&out, &set);
    }
    if scenario.p > 0.0 {
        out = apply_unchecked(&out, &collective_kraus(scenario.p)?);
    }
    Ok(out)
}

/// `tr_A(rho)`: the 3x3 qutrit marginal of a 6x6 operator.
pub(crate) fn trace_out_qubit(rho: &Matrix) -> Matrix {
    Matrix::from_fn(3, 3, |k, l| rho[(k, l)] + rho[(3 + k, 3 + l)])
}

/// `tr_B(rho)`: the 2x2 qubit marginal of a 6x6 operator.
pub(crate) fn trace_out_qutrit(rho: &Matrix) -> Matrix {
    Matrix::from_fn(2, 2, |i, j| (0..3).map(|k| rho[(3 * i + k, 3 * j + k)]).sum())
}

/// Closed form of the lifted qubit channel: `(1-p) rho + (p/3)(2 I2 (x) rho_B - rho)`.
pub(crate) fn qubit_channel_identity(rho: &Matrix, p: f64) -> Matrix {
    let marginal = Matrix::identity(2).kron(&trace_out_qubit(rho));
    rho.scale_real(1.0 - p)
        .add(&marginal.scale_real(2.0).sub(rho).expect("6x6").scale_real(p / 3.0))
        .expect("6x6")
}

/// Closed form of the lifted qutrit channel: `(1-p) rho + (p/8)(3 rho_A (x) I3 - rho)`.
pub(crate) fn qutrit_channel_identity(rho: &Matrix, p: f64) -> Matrix {
    let marginal = trace_out_qutrit(rho).kron(&Matrix::identity(3));
    rho.scale_real(1.0 - p)
        .add(&marginal.scale_real(3.0).sub(rho).expect("6x6").scale_real(p / 8.0))
        .expect("6x6")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::rho_x;
    use num_complex::Complex64;

    fn qubit_state() -> Matrix {
        Matrix::new(
            2,
            2,
            vec![
                Complex64::new(0.7, 0.0),
                Complex64::new(0.2, -0.1),
                Complex64::new(0.2, 0.1),
                Complex64::new(0.3, 0.0),
            ],
        )
        .unwrap()
    }

    fn qutrit_state() -> Matrix {
        // Gram matrix of a fixed complex vector set, normalised.
        let v = Matrix::new(
            3,
            3,
            vec![
                Complex64::new(0.5, 0.1),
                Complex64::new(0.2, 0.0),
                Complex64::new(0.0, 0.3),
                Complex64::new(0.1, -0.2),
                Complex64::new(0.6, 0.0),
                Complex64::new(0.1, 0.1),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.3, 0.3),
                Complex64::new(0.4, -0.1),
            ],
        )
        .unwrap();
        let g = v.matmul(&v.adjoint()).unwrap();
        let t = g.trace().unwrap().re;
        g.scale_real(1.0 / t)
    }

    #[test]
    fn qubit_kraus_at_zero_is_identity() {
        let set = qubit_depolarizing_kraus(0.0).unwrap();
        assert_eq!(set.len(), 4);
        assert_eq!(set.operators()[0], Matrix::identity(2));
        for e in &set.operators()[1..] {
            assert_eq!(*e, Matrix::zeros(2, 2));
        }
        let rho = qubit_state();
        assert!(apply_channel(&rho, &set).unwrap().max_abs_diff(&rho).unwrap() < 1e-15);
    }

    #[test]
    fn qubit_kraus_three_quarters_fully_depolarizes() {
        let set = qubit_depolarizing_kraus(0.75).unwrap();
        let out = apply_channel(&qubit_state(), &set).unwrap();
        let half = Matrix::identity(2).scale_real(0.5);
        assert!(out.max_abs_diff(&half).unwrap() < 1e-15);
    }

    #[test]
    fn qutrit_kraus_eight_ninths_fully_depolarizes() {
        let set = qutrit_depolarizing_kraus(8.0 / 9.0).unwrap();
        assert_eq!(set.len(), 9);
        let out = apply_channel(&qutrit_state(), &set).unwrap();
        let third = Matrix::identity(3).scale_real(1.0 / 3.0);
        assert!(out.max_abs_diff(&third).unwrap() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(qubit_depolarizing_kraus(1.1), Err(Error::Domain { .. })));
        assert!(matches!(qutrit_depolarizing_kraus(-0.1), Err(Error::Domain { .. })));
        assert!(matches!(collective_kraus(f64::NAN), Err(Error::Domain { .. })));
        assert!(NoiseScenario::qubit_local(2.0).is_err());
        assert!(NoiseScenario::new(NoiseKind::QubitLocal, 0.1, 0.2, 0.0).is_err());
    }

    #[test]
    fn weyl_generators_match_printed_form() {
        let (y, z) = weyl_generators();
        // Y|0> = |2>, Y|1> = |0>, Y|2> = |1>.
        assert_eq!(y[(2, 0)], ONE);
        assert_eq!(y[(0, 1)], ONE);
        assert_eq!(y[(1, 2)], ONE);
        let w = omega();
        assert!((z[(1, 1)] - w).norm() < 1e-16);
        assert!((z[(2, 2)] - w * w).norm() < 1e-15);
        // With Y|j> = |j-1>, the clock picks up the phase on the other side: Y Z = w Z Y.
        let yz = y.matmul(&z).unwrap();
        let zy = z.matmul(&y).unwrap().scale(w);
        assert!(yz.max_abs_diff(&zy).unwrap() < 1e-15);
        for u in weyl_unitaries() {
            let uu = u.adjoint().matmul(&u).unwrap();
            assert!(uu.max_abs_diff(&Matrix::identity(3)).unwrap() <= 1e-15);
        }
    }

    #[test]
    fn lift_checks_dimension() {
        let q = qubit_depolarizing_kraus(0.3).unwrap();
        assert!(lift_to_composite(&q, Side::Qutrit).is_err());
        let lifted = lift_to_composite(&q, Side::Qubit).unwrap();
        assert_eq!(lifted.dim(), 6);
        assert!(lifted.completeness_defect() <= 1e-12);
        let zero = lift_to_composite(&qubit_depolarizing_kraus(0.0).unwrap(), Side::Qubit).unwrap();
        assert_eq!(zero.operators()[0], Matrix::identity(6));
    }

    #[test]
    fn lifted_qubit_channel_leaves_qutrit_marginal() {
        let rho = rho_x(0.2).unwrap();
        let out = evolve(&NoiseScenario::qubit_local(0.6).unwrap(), &rho).unwrap();
        let before = trace_out_qubit(&rho);
        let after = trace_out_qubit(&out);
        assert!(before.max_abs_diff(&after).unwrap() < 1e-15);
    }

    #[test]
    fn qubit_channel_scales_coherence() {
        for &p in &[0.1, 0.4, 0.75, 1.0] {
            let rho = rho_x(0.25).unwrap();
            let out = evolve(&NoiseScenario::qubit_local(p).unwrap(), &rho).unwrap();
            let expected = 0.25 * (1.0 - 4.0 * p / 3.0);
            assert!((out[(0, 5)].re - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn channel_identities_hold() {
        let rho = rho_x(0.17).unwrap();
        for &p in &[0.0, 0.3, 1.0] {
            let a = evolve(&NoiseScenario::qubit_local(p).unwrap(), &rho).unwrap();
            assert!(a.max_abs_diff(&qubit_channel_identity(&rho, p)).unwrap() < 1e-15);
            let b = evolve(&NoiseScenario::qutrit_local(p).unwrap(), &rho).unwrap();
            assert!(b.max_abs_diff(&qutrit_channel_identity(&rho, p)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn apply_rejects_non_density() {
        let set = lift_to_composite(&qubit_depolarizing_kraus(0.2).unwrap(), Side::Qubit).unwrap();
        assert!(matches!(
            apply_channel(&Matrix::identity(6), &set),
            Err(Error::NotDensity(_))
        ));
        assert!(matches!(
            apply_channel(&Matrix::identity(2), &set),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn global_noiseless_is_identity() {
        let rho = rho_x(0.2).unwrap();
        let out = evolve(&NoiseScenario::global(0.0, 0.0, 0.0).unwrap(), &rho).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn scenario_parsing() {
        for k in NoiseKind::ALL {
            assert_eq!(k.name().parse::<NoiseKind>().unwrap(), k);
        }
        assert!("bogus".parse::<NoiseKind>().is_err());
        let s = NoiseScenario::multilocal(0.2, 0.3).unwrap();
        assert_eq!(s.with(Param::P2, 0.5).unwrap().p2(), 0.5);
        assert!(s.with(Param::P, 0.5).is_err());
    }
}
