mod common;

use common::*;
use planar_casimir::kernel::force;
use planar_casimir::scenarios::{
    lifshitz_halfspaces, plate_wall, slab_in_cavity_gap_form, slab_in_cavity_offset_form,
    two_plates, CavityGap, HalfSpaces, PlateWall, SlabInCavity, TwoPlates,
};
use planar_casimir::MaterialModel;
use rand::Rng;

const TEMPERATURES: [f64; 2] = [0.0, 300.0];

fn eps(e: f64) -> MaterialModel<f64> {
    MaterialModel::constant(e, 1.0)
}

#[test]
fn scenarios_match_generic_stack() {
    for (name, worst, label) in worst_equivalence(11, 12) {
        assert!(worst < 1e-10, "{name}: {worst:e} at {label}");
    }
}

#[test]
fn halfspaces_limits() {
    let s = settings();
    let same = HalfSpaces::new(eps(3.0), eps(3.0), eps(3.0), 1e-7).unwrap();
    for t in TEMPERATURES {
        assert_eq!(lifshitz_halfspaces(&same, t, &s).unwrap().pressure, 0.0);
    }
    let pc = MaterialModel::PerfectConductor;
    let mirrors = HalfSpaces::new(pc.clone(), MaterialModel::Vacuum, pc, 1e-6).unwrap();
    let p = lifshitz_halfspaces(&mirrors, 0.0, &s).unwrap().pressure;
    assert!(rel(p, ideal_pressure(1e-6)) < s.rel_tol);
}

#[test]
fn thick_plate_is_a_halfspace() {
    let s = settings();
    let gold = MaterialModel::drude(1.37e16, 5.32e13);
    for t in TEMPERATURES {
        let pw = PlateWall::new(eps(4.0), MaterialModel::Vacuum, gold.clone(), eps(2.0), 2e-7, 1e-5)
            .unwrap();
        let hs = HalfSpaces::new(eps(4.0), MaterialModel::Vacuum, gold.clone(), 2e-7).unwrap();
        let a = plate_wall(&pw, t, &s).unwrap().pressure;
        let b = lifshitz_halfspaces(&hs, t, &s).unwrap().pressure;
        assert!(rel(a, b) < 1e-10, "T={t}: {a} vs {b}");
    }
}

#[test]
fn plate_of_exterior_medium_vanishes_optically() {
    let s = settings();
    let mut r = rng(5);
    for _ in 0..8 {
        let (wall, gap, ext) = (medium(&mut r), medium(&mut r), medium(&mut r));
        let (a, b) = (length(&mut r), length(&mut r));
        let t = temperature(&mut r);
        let pw = PlateWall::new(wall.clone(), gap.clone(), ext.clone(), ext.clone(), a, b).unwrap();
        let hs = HalfSpaces::new(wall, gap, ext, a).unwrap();
        let x = plate_wall(&pw, t, &s).unwrap().pressure;
        let y = lifshitz_halfspaces(&hs, t, &s).unwrap().pressure;
        let z = force(&pw.to_stack().unwrap(), t, &s).unwrap().pressure;
        assert!(rel(x, y) < 1e-10);
        assert!(rel(x, z) < 1e-10);
    }
}

fn cavity(delta_fraction: f64) -> SlabInCavity<f64> {
    let h = 6e-7;
    SlabInCavity::from_offset(
        eps(6.0),
        MaterialModel::constant(3.0, 1.7),
        MaterialModel::Vacuum,
        1e-7,
        h,
        delta_fraction * h,
    )
    .unwrap()
}

#[test]
fn centred_slab_feels_no_net_force() {
    let s = settings();
    let geo = cavity(0.0);
    for t in TEMPERATURES {
        assert_eq!(slab_in_cavity_gap_form(&geo, t, &s).unwrap().pressure, 0.0);
        assert_eq!(slab_in_cavity_offset_form(&geo, t, &s).unwrap().pressure, 0.0);
    }
}

#[test]
fn slab_force_is_odd_in_offset() {
    let s = settings();
    for f in [0.1, 0.25, 0.4] {
        let (pos, neg) = (cavity(f), cavity(-f));
        for t in TEMPERATURES {
            for form in [slab_in_cavity_gap_form::<f64>, slab_in_cavity_offset_form::<f64>] {
                let a = form(&pos, t, &s).unwrap().pressure;
                let b = form(&neg, t, &s).unwrap().pressure;
                assert!(rel(a, -b) < s.rel_tol, "{a} vs {b}");
            }
        }
    }
}

#[test]
fn slab_forms_agree_with_each_other_and_with_two_stacks() {
    let s = settings();
    for f in [0.1, 0.25, 0.4] {
        let geo = cavity(f);
        for t in TEMPERATURES {
            let gap = slab_in_cavity_gap_form(&geo, t, &s).unwrap().pressure;
            let off = slab_in_cavity_offset_form(&geo, t, &s).unwrap().pressure;
            let plus = force(&geo.to_stack(CavityGap::Plus).unwrap(), t, &s).unwrap().pressure;
            let minus = force(&geo.to_stack(CavityGap::Minus).unwrap(), t, &s).unwrap().pressure;
            assert!(rel(gap, off) < 1e-11, "δ={f}h T={t}: {gap} vs {off}");
            assert!(rel(gap, plus - minus) < 1e-11, "δ={f}h T={t}: {gap} vs {}", plus - minus);
            // positive: toward larger δ, i.e. toward the nearer wall
            assert!(gap > 0.0);
        }
    }
}

#[test]
fn thick_slab_separates_the_gaps() {
    let s = settings();
    let (wall, slab, gap) = (eps(6.0), MaterialModel::constant(3.0, 1.7), MaterialModel::Vacuum);
    let geo =
        SlabInCavity::from_gaps(wall.clone(), slab.clone(), gap.clone(), 1e-4, 2e-7, 5e-7).unwrap();
    for t in TEMPERATURES {
        let net = slab_in_cavity_gap_form(&geo, t, &s).unwrap().pressure;
        let left = HalfSpaces::new(wall.clone(), gap.clone(), slab.clone(), 2e-7).unwrap();
        let right = HalfSpaces::new(slab.clone(), gap.clone(), wall.clone(), 5e-7).unwrap();
        let l = lifshitz_halfspaces(&left, t, &s).unwrap().pressure;
        let r = lifshitz_halfspaces(&right, t, &s).unwrap().pressure;
        assert!(rel(net, l - r) < 1e-10, "T={t}: {net} vs {}", l - r);
    }
}

#[test]
fn vanishing_slab_feels_nothing() {
    let s = settings();
    let geo = SlabInCavity::from_offset(eps(6.0), eps(3.0), MaterialModel::Vacuum, 1e-300, 6e-7, 1e-7)
        .unwrap();
    let reference = slab_in_cavity_offset_form(&cavity(1.0 / 6.0), 0.0, &s).unwrap().pressure;
    let p = slab_in_cavity_offset_form(&geo, 0.0, &s).unwrap().pressure;
    assert!(p.abs() < 1e-250 * reference.abs().max(1.0));
}

#[test]
fn two_plates_limits() {
    let s = settings();
    let (p1, p2) = (eps(7.0), MaterialModel::constant(2.0, 2.5));
    // the static term sees e^{−2k⊥b} at small k⊥, so "thick" must beat 1/k⊥
    let thick = TwoPlates::new(p1.clone(), 1e-2, p2.clone(), 1e-2, MaterialModel::Vacuum, eps(3.0), 3e-7)
        .unwrap();
    let hs = HalfSpaces::new(p1.clone(), MaterialModel::Vacuum, p2.clone(), 3e-7).unwrap();
    for t in TEMPERATURES {
        let a = two_plates(&thick, t, &s).unwrap().pressure;
        let b = lifshitz_halfspaces(&hs, t, &s).unwrap().pressure;
        assert!(rel(a, b) < 1e-10, "T={t}: {a} vs {b}");
    }
    // with nothing behind them, thinner plates attract less
    let open = TwoPlates { exterior: MaterialModel::Vacuum, ..thick.clone() };
    let thin = TwoPlates { b1: 2e-8, b2: 2e-8, ..open.clone() };
    let a = two_plates(&thin, 0.0, &s).unwrap().pressure;
    let b = two_plates(&open, 0.0, &s).unwrap().pressure;
    assert!(a.abs() < b.abs());
}

#[test]
fn random_plates_match_stack() {
    let s = settings();
    let mut r = rng(23);
    for _ in 0..8 {
        let g = common::two_plates(&mut r);
        let t = if r.gen_bool(0.5) { 0.0 } else { 300.0 };
        let a = two_plates(&g, t, &s).unwrap().pressure;
        let b = force(&g.to_stack().unwrap(), t, &s).unwrap().pressure;
        assert!(rel(a, b) < 1e-10);
    }
}
