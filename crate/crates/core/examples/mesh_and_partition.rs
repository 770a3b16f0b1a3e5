//! Builds a channel mesh, writes it in the text format, reads it back and
//! prints the multiplier partition of the non-inlet boundary.
//!
//! `cargo run --example mesh_and_partition`

use bf_transport_fem::mesh::{build_multiplier_partition, build_rectangle, format_mesh, parse_mesh, BoundaryTag, SideTags};

fn main() -> bf_transport_fem::Result<()> {
    let tags = SideTags {
        top: BoundaryTag::Outlet,
        ..SideTags::channel()
    };
    let mesh = build_rectangle([0.0, 0.0], [2.0, 1.0], 4, 2, tags)?;
    println!(
        "{} vertices, {} triangles, {} edges, h = {:.4}",
        mesh.n_vertices(),
        mesh.n_triangles(),
        mesh.n_edges(),
        mesh.max_diameter()
    );
    for tag in [BoundaryTag::Inlet, BoundaryTag::Wall, BoundaryTag::Outlet] {
        println!("{tag:>7}: {} edges", mesh.edges_with_tag(tag).count());
    }

    let text = format_mesh(&mesh);
    let back = parse_mesh(&text)?;
    assert_eq!(back, mesh);
    println!("\n{}", text.lines().take(6).collect::<Vec<_>>().join("\n"));
    println!("...");

    let part = build_multiplier_partition(&mesh)?;
    println!(
        "\nmultiplier: {} macro edges, {} macro vertices, {} free",
        part.n_macro_edges(),
        part.n_macro_vertices(),
        part.n_free()
    );
    for &e in part.chain_edges() {
        let [a, b] = mesh.edges()[e];
        let hats = part.hats_at(e, 0.5).unwrap();
        println!("  edge {a:2}-{b:2} ({:?}): hats at midpoint {hats:?}", mesh.edge_tag(e).unwrap());
    }
    Ok(())
}
