use std::path::Path;
use std::process::Command;

fn header() -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/dirac_time.h");
    std::fs::read_to_string(p).expect("header is generated by build.rs")
}

#[test]
fn header_declares_every_export() {
    let h = header();
    let src = include_str!("../src/lib.rs");
    let mut count = 0;
    for line in src.lines() {
        let Some(rest) = line.split("extern \"C\" fn ").nth(1) else { continue };
        let name = rest.split('(').next().unwrap();
        assert!(h.contains(&format!("{name}(")), "{name} missing from header");
        count += 1;
    }
    assert!(count >= 15, "only {count} exports found");
    for ty in ["typedef struct DtGrid DtGrid;", "typedef struct DtField DtField;", "DT_STATUS_OK = 0"] {
        assert!(h.contains(ty), "{ty}");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let probe = std::env::temp_dir().join(format!("dirac_time_probe_{}.c", std::process::id()));
    std::fs::write(
        &probe,
        "#include \"dirac_time.h\"\nint main(void) { DtModelParams p = {1.0, 0.0, 1.0}; (void)p; return dt_grid_new(16, 1.0, 0) == DT_STATUS_NULL_POINTER ? 0 : 1; }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&dir)
        .arg(&probe)
        .status();
    let _ = std::fs::remove_file(&probe);
    match status {
        Ok(s) => assert!(s.success(), "C compiler rejected the header"),
        Err(e) => eprintln!("skipping: no C compiler ({e})"),
    }
}
