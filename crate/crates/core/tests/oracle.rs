mod common;

use common::*;
use quasichaos::basis::SectorBasis;
use quasichaos::eigen::eigenvalues;
use quasichaos::lattice::LatticeSpec;
use quasichaos::materialize::{materialize, materialize_full};
use quasichaos::models::*;
use quasichaos::symmetry::SymmetrySector;

fn cases() -> Vec<(Model, LatticeSpec, f64, Dense)> {
    let mut out = Vec::new();
    for (l, j) in [(6, 0.3), (7, 0.8), (8, 0.15)] {
        let lat = LatticeSpec::chain(l).unwrap();
        out.push((Model::H1d, lat, j, h1d(l, j)));
        out.push((Model::H1dsw, lat, j, h1dsw(l, j)));
    }
    for (lx, ly, j) in [(2, 2, 0.4), (3, 2, 0.7)] {
        let lat = LatticeSpec::torus(lx, ly).unwrap();
        out.push((Model::H2dtfim, lat, j, h2dtfim(lx, ly, j)));
        out.push((Model::H2dpt, lat, j, h2dpt(lx, ly, j)));
    }
    out
}

#[test]
fn full_space_matrices_match_kronecker_construction() {
    for (model, lat, j, dense) in cases() {
        let m = materialize_full(&model.build(&lat, j).unwrap()).unwrap();
        let mut worst: f64 = 0.0;
        for c in 0..dense.ncols() {
            for r in 0..dense.nrows() {
                worst = worst.max((m.entries[(r, c)].re - dense[(r, c)]).abs()).max(m.entries[(r, c)].im.abs());
            }
        }
        assert!(worst < 1e-12, "{model} on {}: {worst}", lat.label());
    }
}

#[test]
fn sector_spectra_recombine_to_full_spectrum() {
    for (model, lat, j, dense) in cases() {
        let spec = model.build(&lat, j).unwrap();
        let reference = spectrum(&dense);
        let mut sector_lists = vec![SymmetrySector::all(&lat)];
        if !lat.is_chain() {
            sector_lists.push(SymmetrySector::all_with_mirrors(&lat));
        }
        for sectors in sector_lists {
            let mut union = Vec::new();
            for s in &sectors {
                let b = SectorBasis::build(&lat, s).unwrap();
                union.extend(eigenvalues(&materialize(&spec, &b).unwrap()).unwrap());
            }
            union.sort_by(f64::total_cmp);
            let d = multiset_distance(&union, &reference);
            assert!(d < 1e-9, "{model} on {}: {d}", lat.label());
        }
    }
}

#[test]
fn schrieffer_wolff_identities_dense() {
    for l in [6, 8] {
        for j in [0.1, 0.3] {
            let g = 4.0 * j;
            let s = sw_generator(l, j);
            let h0 = field(l);
            let v = pair_sum(l);
            let mut lhs = commutator(&s, &h0);
            add_scaled(&mut lhs, &v, g);
            assert!(max_abs(&lhs) < 1e-12);
            let mut eff = h0.clone();
            add_scaled(&mut eff, &commutator(&s, &v), g / 2.0);
            add_scaled(&mut eff, &h1dsw(l, j), -1.0);
            assert!(max_abs(&eff) < 1e-12, "L={l} J={j}: {}", max_abs(&eff));
        }
    }
}

#[test]
fn kronecker_helpers() {
    // site 0 is the least significant bit
    let z0 = string(2, &[(0, sz())]);
    assert_eq!(z0[(1, 1)], 1.0);
    assert_eq!(z0[(2, 2)], -1.0);
    let p = string(2, &[(1, sp())]);
    assert_eq!(p[(2, 0)], 1.0);
    assert_eq!(torus_bonds(2, 2).len(), 4);
    assert_eq!(torus_bonds(3, 3).len(), 18);
    assert_eq!(ring_bonds(4, 2).len(), 2);
}
