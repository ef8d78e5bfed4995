//! Classify signed supports: the smallest face holding the negative terms,
//! nonseparability, and for nonseparable supports the simplices whose
//! interiors share a chamber with every negative point.

use copositive::geometry::{
    find_cell_witness, is_nonseparable, simplices_containing_cell, smallest_face_containing, LatticePoint,
    SignedSupport,
};

fn pts(v: &[[i64; 2]]) -> Vec<LatticePoint> {
    v.iter().map(|p| LatticePoint(p.to_vec())).collect()
}

fn show(name: &str, support: &SignedSupport) -> copositive::Result<()> {
    println!("== {name}");
    let gamma = smallest_face_containing(support, support.a_minus())?;
    println!("smallest face holding A-: {} points", gamma.points.len());
    let (nonsep, diag) = is_nonseparable(support)?;
    if !nonsep {
        println!("separable: {diag:?}");
        return Ok(());
    }
    let w = find_cell_witness(support)?;
    let fam = simplices_containing_cell(support, &w)?;
    println!("nonseparable, chamber witness {:?}", w.point.iter().map(|q| q.to_string()).collect::<Vec<_>>());
    for (k, s) in fam.simplices.iter().enumerate() {
        let verts: Vec<String> = s.iter().map(|&i| support.a_plus()[i].to_string()).collect();
        let lambda: Vec<Vec<String>> =
            fam.lambda[k].iter().map(|l| l.iter().map(|q| q.to_string()).collect()).collect();
        println!("  simplex {} with barycentric coordinates {:?}", verts.join(" "), lambda);
    }
    Ok(())
}

fn main() -> copositive::Result<()> {
    let square = pts(&[[0, 0], [2, 0], [0, 2], [2, 2]]);
    show("square with center", &SignedSupport::new(square, pts(&[[1, 1]]))?)?;

    let pentagon = pts(&[[0, 0], [4, 0], [6, 4], [2, 7], [-2, 4]]);
    show("pentagon, two negative points", &SignedSupport::new(pentagon, pts(&[[2, 3], [3, 3]]))?)?;

    let corners = pts(&[[0, 0], [4, 0], [0, 4], [4, 4]]);
    show("diagonal pair", &SignedSupport::new(corners, pts(&[[1, 1], [3, 3]]))?)?;
    Ok(())
}
