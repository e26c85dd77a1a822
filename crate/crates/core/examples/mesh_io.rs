//! Round trip a mesh through the index-list text format and export one
//! doubled-torus slice for an external viewer.

use sweepout::mesh::build::clifford_torus;
use sweepout::mesh::io::{read_mesh, stereographic, write_mesh, write_soup};
use sweepout::mesh::Ambient;
use sweepout::s3::{doubled_slice, DoublingConfig, Stage};

fn main() -> sweepout::Result<()> {
    let dir = std::env::temp_dir().join("sweepout-mesh-io");
    std::fs::create_dir_all(&dir)?;

    let torus = clifford_torus(32)?;
    let path = dir.join("clifford.txt");
    write_mesh(&path, &torus)?;
    let back = read_mesh(&path)?;
    println!(
        "{}: {} vertices, {} triangles, χ = {}; flat-triangle area {:.8} vs chart area {:.8}",
        path.display(),
        back.n_vertices(),
        back.triangles.len(),
        back.euler_characteristic(),
        back.area(),
        torus.area()
    );

    let slice = doubled_slice(&DoublingConfig::new(2), Stage::Necks, 0.2)?;
    let s3 = dir.join("doubled_m2_t0.2_s3.txt");
    let r3 = dir.join("doubled_m2_t0.2_r3.txt");
    write_soup(&s3, Ambient::RoundS3, &slice.soup)?;
    write_soup(&r3, Ambient::EuclideanR3, &stereographic(&slice.soup))?;
    println!(
        "doubled slice t = 0.2: {} vertices, χ = {:?}, written to {} and {}",
        slice.soup.vertices.len(),
        slice.euler,
        s3.display(),
        r3.display()
    );
    Ok(())
}
