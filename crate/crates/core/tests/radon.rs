use std::f64::consts::PI;

use pswf_recon::radon::{
    inverse_radon, projection_theorem_check, sobolev_norm_grid, GridFunction2D, InverseRadonOptions, Phantom, Sinogram,
};
use pswf_recon::rng;
use pswf_recon::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn two_disks() -> Phantom {
    Phantom::Sum {
        parts: vec![
            Phantom::Disk {
                center: [0.3, 0.1],
                radius: 0.2,
            },
            Phantom::Disk {
                center: [-0.2, -0.25],
                radius: 0.35,
            },
        ],
    }
}

#[test]
fn projection_theorem_is_linear() {
    let sum = two_disks();
    let Phantom::Sum { parts } = &sum else { unreachable!() };
    for phi in [0.0, 1.1, 2.5] {
        let (lhs, rhs) = projection_theorem_check(&sum, 2.0, phi).unwrap();
        let parts_lhs: Complex64 = parts.iter().map(|p| projection_theorem_check(p, 2.0, phi).unwrap().0).sum();
        assert!((lhs - parts_lhs).norm() < 1e-14);
        assert!((lhs - rhs).norm() < 1e-8);
    }
    let (lhs, rhs) = projection_theorem_check(&Phantom::disk(1.0), 0.0, 0.4).unwrap();
    assert!((lhs.re - 1.0 / (4.0 * PI)).abs() < 1e-14 && (rhs - lhs).norm() < 1e-12);
}

#[test]
fn off_centre_reconstruction_sits_in_the_right_place() {
    let ph = two_disks();
    let sino = Sinogram::from_phantom(&ph, 256, 180).unwrap();
    let rec = inverse_radon(&sino, 1.0, 64, InverseRadonOptions::default()).unwrap();
    // sample at the grid points closest to each centre and at a far corner
    let at = |q: [f64; 2]| {
        let h = 2.0 / 64.0;
        let j = ((q[0] + 1.0) / h).round() as usize;
        let i = ((q[1] + 1.0) / h).round() as usize;
        rec.get(i, j).re
    };
    assert!(at([0.3, 0.1]) > 0.6);
    assert!(at([-0.2, -0.25]) > 0.6);
    assert!(at([0.7, -0.7]).abs() < 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn order_zero_norm_is_grid_l2(seed in any::<u64>(), log_size in 3u32..6, extent in 0.5f64..4.0) {
        let size = 1usize << log_size;
        let mut g = rng::stream(seed, 0);
        let values = (0..size * size)
            .map(|_| Complex64::new(g.random_range(-1.0..1.0), g.random_range(-1.0..1.0)))
            .collect();
        let f = GridFunction2D::new(extent, size, values).unwrap();
        let n0 = sobolev_norm_grid(&f, 0.0).unwrap();
        prop_assert!((n0 - f.l2_norm()).abs() <= 1e-10 * f.l2_norm().max(1.0));
        let neg = sobolev_norm_grid(&f, -0.5).unwrap();
        let pos = sobolev_norm_grid(&f, 1.0).unwrap();
        prop_assert!(neg <= n0 * (1.0 + 1e-12) && n0 <= pos * (1.0 + 1e-12));
    }

    #[test]
    fn radon_has_antipodal_symmetry(y in -1.0f64..1.0, phi in 0.0f64..PI) {
        let ph = two_disks();
        let a = ph.radon(y, phi).unwrap();
        let b = ph.radon(-y, phi + PI).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn extended_columns_mirror(k in 0usize..12) {
        let sino = Sinogram::from_phantom(&two_disks(), 33, 12).unwrap();
        let ext = sino.extended_column(k + 12);
        let ys = sino.y_grid();
        for (m, v) in ext.iter().enumerate() {
            let want = two_disks().radon(ys[m], sino.phi(k) + PI).unwrap();
            prop_assert!((v.re - want).abs() < 1e-12);
        }
    }
}
