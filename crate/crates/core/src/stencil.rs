//! Per-node stencil construction: the fourth-order flux operators, the mass
//! averaging operators, and the point-weighting 25-point / 17-point schemes
//! plus the two baseline schemes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::pml::CoefficientFields;

/// Weights of the point-weighting 25-point scheme. `c1` is derived from the
/// sum-to-one constraint and `a2 = 1 - a1`, so neither can drift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams25 {
    pub a1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl SchemeParams25 {
    pub fn new(a1: f64, c2: f64, c3: f64, c4: f64) -> Result<Self> {
        for (name, v) in [("a1", a1), ("c2", c2), ("c3", c3), ("c4", c4)] {
            if !v.is_finite() {
                return Err(Error::InvalidParam(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(Self { a1, c2, c3, c4 })
    }

    /// The unweighted scheme: reduces to the NC fourth-order stencil.
    pub fn baseline() -> Self {
        Self { a1: 1.0, c2: 0.0, c3: 0.0, c4: 0.0 }
    }

    pub fn a2(&self) -> f64 {
        1.0 - self.a1
    }

    pub fn c1(&self) -> f64 {
        1.0 - self.c2 - self.c3 - self.c4
    }
}

/// Weights of the point-weighting 17-point scheme; `d1` and `b2` are derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams17 {
    pub b1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl SchemeParams17 {
    pub fn new(b1: f64, d2: f64, d3: f64) -> Result<Self> {
        for (name, v) in [("b1", b1), ("d2", d2), ("d3", d3)] {
            if !v.is_finite() {
                return Err(Error::InvalidParam(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(Self { b1, d2, d3 })
    }

    pub fn baseline() -> Self {
        Self { b1: 1.0, d2: 0.0, d3: 0.0 }
    }

    pub fn b2(&self) -> f64 {
        1.0 - self.b1
    }

    pub fn d1(&self) -> f64 {
        1.0 - self.d2 - self.d3
    }
}

/// Scheme family without parameters; what run specs name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Pw25,
    Pw17,
    Nc4,
    Conventional5,
}

impl SchemeKind {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::Pw25 => "pw25",
            SchemeKind::Pw17 => "pw17",
            SchemeKind::Nc4 => "nc4",
            SchemeKind::Conventional5 => "conventional5",
        }
    }

    /// The scheme with its dispersion-neutral default parameters.
    pub fn baseline(&self) -> Scheme {
        match self {
            SchemeKind::Pw25 => Scheme::Pw25(SchemeParams25::baseline()),
            SchemeKind::Pw17 => Scheme::Pw17(SchemeParams17::baseline()),
            SchemeKind::Nc4 => Scheme::Nc4,
            SchemeKind::Conventional5 => Scheme::Conventional5,
        }
    }
}

/// A scheme selection together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    Pw25(SchemeParams25),
    Pw17(SchemeParams17),
    Nc4,
    Conventional5,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Pw25(_) => "pw25",
            Scheme::Pw17(_) => "pw17",
            Scheme::Nc4 => "nc4",
            Scheme::Conventional5 => "conventional5",
        }
    }

    pub fn kind(&self) -> SchemeKind {
        match self {
            Scheme::Pw25(_) => SchemeKind::Pw25,
            Scheme::Pw17(_) => SchemeKind::Pw17,
            Scheme::Nc4 => SchemeKind::Nc4,
            Scheme::Conventional5 => SchemeKind::Conventional5,
        }
    }

    /// How many boundary rings the stencil footprint needs.
    pub fn footprint_ring(&self) -> usize {
        match self {
            Scheme::Conventional5 => 1,
            _ => 2,
        }
    }

    pub fn stencil(
        &self,
        node: (usize, usize),
        fields: &CoefficientFields,
        grid: &GridSpec,
    ) -> Result<Stencil> {
        match self {
            Scheme::Pw25(p) => pw25_stencil(node, fields, p, grid),
            Scheme::Pw17(p) => pw17_stencil(node, fields, p, grid),
            Scheme::Nc4 => nc4_stencil(node, fields, grid),
            Scheme::Conventional5 => conventional5_stencil(node, fields, grid),
        }
    }
}

/// Complex weights on the 5x5 footprint centered at node `(m, n)`.
#[derive(Debug, Clone)]
pub struct Stencil {
    pub m: usize,
    pub n: usize,
    w: [[Complex64; 5]; 5],
}

impl Stencil {
    fn zero(m: usize, n: usize) -> Self {
        Self { m, n, w: [[Complex64::new(0.0, 0.0); 5]; 5] }
    }

    pub fn get(&self, di: i32, dj: i32) -> Complex64 {
        self.w[(di + 2) as usize][(dj + 2) as usize]
    }

    fn add(&mut self, di: i32, dj: i32, v: Complex64) {
        self.w[(di + 2) as usize][(dj + 2) as usize] += v;
    }

    /// Iterate over nonzero entries as `(di, dj, weight)`.
    pub fn entries(&self) -> impl Iterator<Item = (i32, i32, Complex64)> + '_ {
        (-2..=2).flat_map(move |di| {
            (-2..=2).filter_map(move |dj| {
                let w = self.get(di, dj);
                (w != Complex64::new(0.0, 0.0)).then_some((di, dj, w))
            })
        })
    }

    pub fn nonzeros(&self) -> usize {
        self.entries().count()
    }

    /// Apply the stencil to a function of the offset, `sum w(di,dj) f(di,dj)`.
    pub fn apply(&self, f: impl Fn(i32, i32) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for di in -2..=2 {
            for dj in -2..=2 {
                let w = self.get(di, dj);
                if w != Complex64::new(0.0, 0.0) {
                    acc += w * f(di, dj);
                }
            }
        }
        acc
    }
}

/// Outer weights of the conservative flux form, paired with half offsets
/// -3/2, -1/2, +1/2, +3/2 (in units of the spacing).
const OUTER: [f64; 4] = [1.0 / 24.0, -9.0 / 8.0, 9.0 / 8.0, -1.0 / 24.0];

/// Fourth-order first-derivative weights at each half offset, acting on the
/// five nodes -2..=2. Rows ordered like `OUTER`.
const INNER: [[f64; 5]; 4] = [
    [-11.0 / 12.0, 17.0 / 24.0, 3.0 / 8.0, -5.0 / 24.0, 1.0 / 24.0],
    [1.0 / 24.0, -9.0 / 8.0, 9.0 / 8.0, -1.0 / 24.0, 0.0],
    [0.0, 1.0 / 24.0, -9.0 / 8.0, 9.0 / 8.0, -1.0 / 24.0],
    [-1.0 / 24.0, 5.0 / 24.0, -3.0 / 8.0, -17.0 / 24.0, 11.0 / 12.0],
];

/// 1D flux stencil along x: five weights on `p_{m-2..m+2}` given A sampled at
/// the four half offsets `(m - 3/2, m - 1/2, m + 1/2, m + 3/2)`.
pub fn base_flux_stencil_x(a: [Complex64; 4], h: f64) -> [Complex64; 5] {
    let inv_h2 = 1.0 / (h * h);
    let mut w = [Complex64::new(0.0, 0.0); 5];
    for s in 0..4 {
        let f = OUTER[s] * inv_h2;
        for p in 0..5 {
            w[p] += a[s] * (f * INNER[s][p]);
        }
    }
    w
}

/// 1D flux stencil along z: spacing `gamma * h`, B sampled at half offsets.
pub fn base_flux_stencil_z(b: [Complex64; 4], h: f64, gamma: f64) -> [Complex64; 5] {
    base_flux_stencil_x(b, gamma * h)
}

/// Fixed averaging footprint of the mass operator I^(j), j in 1..=4; weights
/// indexed `[di + 2][dj + 2]`.
pub fn mass_stencil(j: usize) -> Result<[[f64; 5]; 5]> {
    let mut w = [[0.0; 5]; 5];
    let mut set = |di: i32, dj: i32, v: f64| {
        w[(di + 2) as usize][(dj + 2) as usize] = v;
    };
    match j {
        1 => set(0, 0, 1.0),
        2 => {
            for (d, v) in [(1, 1.0 / 3.0), (2, -1.0 / 12.0)] {
                set(d, 0, v);
                set(-d, 0, v);
                set(0, d, v);
                set(0, -d, v);
            }
        }
        3 => {
            for (d, v) in [(1, 1.0 / 3.0), (2, -1.0 / 12.0)] {
                set(d, d, v);
                set(-d, -d, v);
                set(d, -d, v);
                set(-d, d, v);
            }
        }
        4 => {
            for (di, dj) in [(2, 2), (2, -2), (-2, 2), (-2, -2)] {
                set(di, dj, 1.0 / 36.0);
            }
            for (di, dj) in
                [(1, 2), (-1, 2), (1, -2), (-1, -2), (2, 1), (2, -1), (-2, 1), (-2, -1)]
            {
                set(di, dj, -1.0 / 9.0);
            }
            for (di, dj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                set(di, dj, 4.0 / 9.0);
            }
        }
        _ => return Err(Error::InvalidParam(format!("mass operator index {j} not in 1..=4"))),
    }
    Ok(w)
}

fn check_footprint(node: (usize, usize), ring: usize, grid: &GridSpec) -> Result<()> {
    let (m, n) = node;
    if m < ring || n < ring || m + ring >= grid.nx || n + ring >= grid.nz {
        return Err(Error::FootprintOutOfRange { m, n });
    }
    Ok(())
}

fn flux_pair(
    node: (usize, usize),
    fields: &CoefficientFields,
    grid: &GridSpec,
) -> ([Complex64; 5], [Complex64; 5]) {
    let (m, n) = node;
    let a = [
        fields.a_half(m - 2, n),
        fields.a_half(m - 1, n),
        fields.a_half(m, n),
        fields.a_half(m + 1, n),
    ];
    let b = [
        fields.b_half(m, n - 2),
        fields.b_half(m, n - 1),
        fields.b_half(m, n),
        fields.b_half(m, n + 1),
    ];
    (base_flux_stencil_x(a, grid.h), base_flux_stencil_z(b, grid.h, grid.gamma))
}

fn add_mass(
    st: &mut Stencil,
    fields: &CoefficientFields,
    weights: &[(usize, f64)],
) -> Result<()> {
    let (m, n) = (st.m, st.n);
    for &(j, cj) in weights {
        if cj == 0.0 {
            continue;
        }
        let mw = mass_stencil(j)?;
        for di in -2..=2i32 {
            for dj in -2..=2i32 {
                let v = mw[(di + 2) as usize][(dj + 2) as usize];
                if v != 0.0 {
                    let q = fields
                        .k2c((m as i32 + di) as usize, (n as i32 + dj) as usize);
                    st.add(di, dj, q * (cj * v));
                }
            }
        }
    }
    Ok(())
}

/// Transverse averaging row of the 25-point point replacement: weights on the
/// offsets -2, -1, +1, +2 perpendicular to the flux direction. The same row
/// applies to every column of the replacement.
const TRANSVERSE_25: [(i32, f64); 4] =
    [(-2, -1.0 / 6.0), (-1, 2.0 / 3.0), (1, 2.0 / 3.0), (2, -1.0 / 6.0)];

/// Optimal point-weighting 25-point stencil at an interior node.
pub fn pw25_stencil(
    node: (usize, usize),
    fields: &CoefficientFields,
    params: &SchemeParams25,
    grid: &GridSpec,
) -> Result<Stencil> {
    check_footprint(node, 2, grid)?;
    let (fx, fz) = flux_pair(node, fields, grid);
    let mut st = Stencil::zero(node.0, node.1);
    let a1 = params.a1;
    let a2 = params.a2();
    for i in -2..=2i32 {
        let f = fx[(i + 2) as usize];
        st.add(i, 0, f * a1);
        for (j, t) in TRANSVERSE_25 {
            st.add(i, j, f * (a2 * t));
        }
    }
    for j in -2..=2i32 {
        let f = fz[(j + 2) as usize];
        st.add(0, j, f * a1);
        for (i, t) in TRANSVERSE_25 {
            st.add(i, j, f * (a2 * t));
        }
    }
    add_mass(
        &mut st,
        fields,
        &[(1, params.c1()), (2, params.c2), (3, params.c3), (4, params.c4)],
    )?;
    Ok(st)
}

/// Optimal point-weighting 17-point stencil at an interior node.
pub fn pw17_stencil(
    node: (usize, usize),
    fields: &CoefficientFields,
    params: &SchemeParams17,
    grid: &GridSpec,
) -> Result<Stencil> {
    check_footprint(node, 2, grid)?;
    let (fx, fz) = flux_pair(node, fields, grid);
    let mut st = Stencil::zero(node.0, node.1);
    let b1 = params.b1;
    let half_b2 = 0.5 * params.b2();
    for i in -2..=2i32 {
        let f = fx[(i + 2) as usize];
        st.add(i, 0, f * b1);
        if i != 0 {
            let a = i.abs();
            st.add(i, a, f * half_b2);
            st.add(i, -a, f * half_b2);
            st.add(0, a, -f * half_b2);
            st.add(0, -a, -f * half_b2);
        }
    }
    for j in -2..=2i32 {
        let f = fz[(j + 2) as usize];
        st.add(0, j, f * b1);
        if j != 0 {
            let a = j.abs();
            st.add(a, j, f * half_b2);
            st.add(-a, j, f * half_b2);
            st.add(a, 0, -f * half_b2);
            st.add(-a, 0, -f * half_b2);
        }
    }
    add_mass(&mut st, fields, &[(1, params.d1()), (2, params.d2), (3, params.d3)])?;
    Ok(st)
}

/// Non-compact fourth-order baseline: both 1D flux stencils plus the
/// unaveraged mass term at the center.
pub fn nc4_stencil(
    node: (usize, usize),
    fields: &CoefficientFields,
    grid: &GridSpec,
) -> Result<Stencil> {
    check_footprint(node, 2, grid)?;
    let (fx, fz) = flux_pair(node, fields, grid);
    let mut st = Stencil::zero(node.0, node.1);
    for i in -2..=2i32 {
        st.add(i, 0, fx[(i + 2) as usize]);
    }
    for j in -2..=2i32 {
        st.add(0, j, fz[(j + 2) as usize]);
    }
    st.add(0, 0, fields.k2c(node.0, node.1));
    Ok(st)
}

/// Classical second-order 5-point scheme in conservative form.
pub fn conventional5_stencil(
    node: (usize, usize),
    fields: &CoefficientFields,
    grid: &GridSpec,
) -> Result<Stencil> {
    check_footprint(node, 1, grid)?;
    let (m, n) = node;
    let inv_h2 = 1.0 / (grid.h * grid.h);
    let dz = grid.dz();
    let inv_dz2 = 1.0 / (dz * dz);
    let al = fields.a_half(m - 1, n) * inv_h2;
    let ar = fields.a_half(m, n) * inv_h2;
    let bd = fields.b_half(m, n - 1) * inv_dz2;
    let bu = fields.b_half(m, n) * inv_dz2;
    let mut st = Stencil::zero(m, n);
    st.add(-1, 0, al);
    st.add(1, 0, ar);
    st.add(0, -1, bd);
    st.add(0, 1, bu);
    st.add(0, 0, -(al + ar + bd + bu) + fields.k2c(m, n));
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ones() -> [Complex64; 4] {
        [c(1.0); 4]
    }

    fn unit_grid(h: f64, gamma: f64) -> GridSpec {
        GridSpec::new(9, 9, h, gamma, (0.0, 0.0)).unwrap()
    }

    fn uniform_fields(grid: &GridSpec, k: f64) -> CoefficientFields {
        CoefficientFields::uniform(grid, k)
    }

    #[test]
    fn base_flux_constant_coefficient() {
        let w = base_flux_stencil_x(ones(), 1.0);
        let expect = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
        for (got, want) in w.iter().zip(expect) {
            assert!((got.re - want).abs() < 1e-14, "{got} vs {want}");
            assert_eq!(got.im, 0.0);
        }
    }

    #[test]
    fn base_flux_z_scales_with_gamma() {
        let w = base_flux_stencil_z(ones(), 1.0, 2.0);
        let expect = [-1.0 / 48.0, 1.0 / 3.0, -5.0 / 8.0, 1.0 / 3.0, -1.0 / 48.0];
        for (got, want) in w.iter().zip(expect) {
            assert!((got.re - want).abs() < 1e-14);
        }
    }

    #[test]
    fn base_flux_annihilates_constants() {
        let a = [c(0.7), c(-1.3), c(2.2), c(0.4)];
        let w = base_flux_stencil_x(a, 0.3);
        let sum: Complex64 = w.iter().sum();
        assert!(sum.norm() < 1e-10);
    }

    #[test]
    fn base_flux_exact_on_quadratics() {
        // centered at x = 10 with h = 1: p(x) = x^2 sampled at 8..=12
        let w = base_flux_stencil_x(ones(), 1.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, wi) in w.iter().enumerate() {
            let x = 8.0 + idx as f64;
            acc += wi * (x * x);
        }
        assert!((acc.re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn mass_operators_partition_unity() {
        for j in 1..=4 {
            let w = mass_stencil(j).unwrap();
            let total: f64 = w.iter().flatten().sum();
            assert!((total - 1.0).abs() < 1e-14, "I^({j}) sums to {total}");
        }
        assert!(mass_stencil(0).is_err());
        assert!(mass_stencil(5).is_err());
    }

    #[test]
    fn mass_4_corner_weight() {
        let w = mass_stencil(4).unwrap();
        assert!((w[1][1] - 4.0 / 9.0).abs() < 1e-15); // offset (-1,-1)
        assert!((w[0][0] - 1.0 / 36.0).abs() < 1e-15); // offset (-2,-2)
        assert!((w[1][0] + 1.0 / 9.0).abs() < 1e-15); // offset (-1,-2)
    }

    #[test]
    fn nc4_cross_shape() {
        let grid = unit_grid(1.0, 1.0);
        let fields = uniform_fields(&grid, 0.0);
        // k = 0 via explicit zero wavenumber
        let fields = {
            let _ = fields;
            CoefficientFields::from_functions(
                &grid,
                |_, _| c(1.0),
                |_, _| c(1.0),
                |_, _| c(1.0),
                |_, _| 0.0,
            )
        };
        let st = nc4_stencil((4, 4), &fields, &grid).unwrap();
        assert!((st.get(0, 0).re + 5.0).abs() < 1e-14);
        for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            assert!((st.get(di, dj).re - 4.0 / 3.0).abs() < 1e-14);
        }
        for (di, dj) in [(2, 0), (-2, 0), (0, 2), (0, -2)] {
            assert!((st.get(di, dj).re + 1.0 / 12.0).abs() < 1e-14);
        }
        assert_eq!(st.get(1, 1), c(0.0));
    }

    #[test]
    fn conventional5_textbook() {
        let grid = unit_grid(1.0, 1.0);
        let fields = CoefficientFields::from_functions(
            &grid,
            |_, _| c(1.0),
            |_, _| c(1.0),
            |_, _| c(1.0),
            |_, _| 0.0,
        );
        let st = conventional5_stencil((4, 4), &fields, &grid).unwrap();
        assert!((st.get(0, 0).re + 4.0).abs() < 1e-14);
        for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            assert!((st.get(di, dj).re - 1.0).abs() < 1e-14);
        }
        // k = 2 cancels the center at h = 1
        let fields2 = CoefficientFields::from_functions(
            &grid,
            |_, _| c(1.0),
            |_, _| c(1.0),
            |_, _| c(1.0),
            |_, _| 2.0,
        );
        let st2 = conventional5_stencil((4, 4), &fields2, &grid).unwrap();
        assert!(st2.get(0, 0).norm() < 1e-14);
    }

    fn wavy_fields(grid: &GridSpec) -> CoefficientFields {
        CoefficientFields::from_functions(
            grid,
            |x, z| Complex64::new(1.0 + 0.3 * (x + 0.4 * z).sin(), 0.2 * (x - z).cos()),
            |x, z| Complex64::new(1.2 + 0.2 * (0.7 * x - z).cos(), 0.1 * (x + z).sin()),
            |x, z| Complex64::new(1.0 + 0.1 * (x * z).sin(), -0.15 * (x + 0.3 * z).cos()),
            |x, z| 1.0 + 0.5 * (0.4 * x + 0.2 * z).sin().powi(2),
        )
    }

    #[test]
    fn pw25_reduces_to_nc4_at_baseline() {
        let grid = unit_grid(0.37, 1.4);
        let fields = wavy_fields(&grid);
        for node in [(2, 2), (4, 3), (6, 6), (3, 5)] {
            let a = pw25_stencil(node, &fields, &SchemeParams25::baseline(), &grid).unwrap();
            let b = nc4_stencil(node, &fields, &grid).unwrap();
            for di in -2..=2 {
                for dj in -2..=2 {
                    assert!((a.get(di, dj) - b.get(di, dj)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn pw17_reduces_to_nc4_at_baseline() {
        let grid = unit_grid(0.52, 0.8);
        let fields = wavy_fields(&grid);
        for node in [(2, 2), (5, 4), (6, 6)] {
            let a = pw17_stencil(node, &fields, &SchemeParams17::baseline(), &grid).unwrap();
            let b = nc4_stencil(node, &fields, &grid).unwrap();
            for di in -2..=2 {
                for dj in -2..=2 {
                    assert!((a.get(di, dj) - b.get(di, dj)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn pw17_excluded_offsets_are_zero() {
        let grid = unit_grid(0.4, 1.0);
        let fields = wavy_fields(&grid);
        let params = SchemeParams17::new(0.8, 0.3, -0.1).unwrap();
        let st = pw17_stencil((4, 4), &fields, &params, &grid).unwrap();
        for (di, dj) in [(1, 2), (1, -2), (-1, 2), (-1, -2), (2, 1), (2, -1), (-2, 1), (-2, -1)] {
            assert_eq!(st.get(di, dj), c(0.0));
        }
        assert!(st.nonzeros() <= 17);
    }

    #[test]
    fn pw25_footprint_count() {
        let grid = unit_grid(0.4, 1.0);
        let fields = wavy_fields(&grid);
        let params = SchemeParams25::new(0.9, 0.2, 0.1, -0.05).unwrap();
        let st = pw25_stencil((4, 4), &fields, &params, &grid).unwrap();
        assert!(st.nonzeros() <= 25);
        assert!(st.nonzeros() > 17);
    }

    #[test]
    fn footprint_bounds_checked() {
        let grid = unit_grid(1.0, 1.0);
        let fields = wavy_fields(&grid);
        assert!(pw25_stencil((1, 4), &fields, &SchemeParams25::baseline(), &grid).is_err());
        assert!(pw17_stencil((4, 7), &fields, &SchemeParams17::baseline(), &grid).is_err());
        assert!(conventional5_stencil((0, 4), &fields, &grid).is_err());
        assert!(conventional5_stencil((1, 4), &fields, &grid).is_ok());
    }

    #[test]
    fn stencils_annihilate_constants_when_k_is_zero() {
        let grid = unit_grid(0.21, 1.7);
        let fields = CoefficientFields::from_functions(
            &grid,
            |x, z| Complex64::new(1.0 + 0.2 * (x * 1.3 + z).sin(), 0.1 * x.cos()),
            |x, z| Complex64::new(1.5 - 0.3 * (x - z).cos(), 0.05 * z.sin()),
            |_, _| c(1.0),
            |_, _| 0.0,
        );
        let p25 = SchemeParams25::new(0.83, 0.4, -0.2, 0.12).unwrap();
        let p17 = SchemeParams17::new(0.76, 0.5, -0.3).unwrap();
        for st in [
            pw25_stencil((3, 3), &fields, &p25, &grid).unwrap(),
            pw17_stencil((3, 3), &fields, &p17, &grid).unwrap(),
            nc4_stencil((3, 3), &fields, &grid).unwrap(),
            conventional5_stencil((3, 3), &fields, &grid).unwrap(),
        ] {
            let v = st.apply(|_, _| c(1.0));
            assert!(v.norm() < 1e-10, "constant not annihilated: {v}");
        }
    }

    #[test]
    fn weights_affine_in_parameters() {
        let grid = unit_grid(0.33, 1.0);
        let fields = wavy_fields(&grid);
        let node = (4, 4);
        // pw25: w(p0 + p1) - w(p0) - w(p1) + w(0) == 0 for the affine map
        let p0 = SchemeParams25::new(0.2, 0.1, -0.3, 0.25).unwrap();
        let p1 = SchemeParams25::new(0.5, -0.2, 0.15, 0.1).unwrap();
        let mid = SchemeParams25::new(
            0.5 * (p0.a1 + p1.a1),
            0.5 * (p0.c2 + p1.c2),
            0.5 * (p0.c3 + p1.c3),
            0.5 * (p0.c4 + p1.c4),
        )
        .unwrap();
        let s0 = pw25_stencil(node, &fields, &p0, &grid).unwrap();
        let s1 = pw25_stencil(node, &fields, &p1, &grid).unwrap();
        let sm = pw25_stencil(node, &fields, &mid, &grid).unwrap();
        for di in -2..=2 {
            for dj in -2..=2 {
                let lin = 0.5 * (s0.get(di, dj) + s1.get(di, dj));
                assert!((lin - sm.get(di, dj)).norm() < 1e-12);
            }
        }
    }
}
