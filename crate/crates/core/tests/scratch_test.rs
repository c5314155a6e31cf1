use qgenus_core::factalg::*;
use qgenus_core::geom::{cyclic_cover, Ambient, CoverSpec, Target};
use qgenus_core::homalg::algebra;
use qgenus_core::homalg::bar::hh_dims;
use qgenus_core::rational::rat;

#[test]
fn diag_refinements() {
    let a = algebra::dual_numbers();
    let hh = hh_dims(&a, 1, 20_000).unwrap();
    println!("hh = {hh:?}");
    for n in [4, 5, 6] {
        let cover = cyclic_cover(&rat(1), n).unwrap();
        let d = cech_homology(&cover, &a, CechConvention::Distinct, 1, 2_000_000);
        println!("cyclic {n}: {d:?}");
    }
    // grid basis: all proper grid arcs at granularity g
    for g in [3usize] {
        let amb = Ambient::circle(rat(1)).unwrap();
        let arcs = grid_sub_basis(&amb, g, &Target::FullCircle).unwrap();
        println!("grid {g}: {} arcs", arcs.len());
        let cover = CoverSpec::new(amb, arcs, Target::FullCircle).unwrap();
        println!("grid {g}: {} families", cover.disjoint_families().len());
        let d = cech_homology(&cover, &a, CechConvention::Distinct, 1, 8_000_000);
        println!("grid {g}: {d:?}");
    }
}
