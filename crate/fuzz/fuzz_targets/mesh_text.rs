#![no_main]

use libfuzzer_sys::fuzz_target;
use recon_afem::mesh::Mesh;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(mesh) = Mesh::from_text(text) {
        assert!(mesh.check_conformity().is_ok());
        let again = Mesh::from_text(&mesh.to_text()).expect("dumped meshes parse");
        assert_eq!(again.num_triangles(), mesh.num_triangles());
        if mesh.num_triangles() < 64 {
            let refined = mesh.uniform_refine();
            assert!(refined.check_conformity().is_ok());
        }
    }
});
