use std::env;
use std::path::Path;

/// The netlib system backend links `-lcblas`, but many distributions ship
/// CBLAS inside libopenblas (or libblas) without a separate libcblas.so.
/// Provide a local alias so the final link resolves.
fn main() {
    let out_dir = env::var("OUT_DIR").expect("OUT_DIR not set");
    let lib_dirs = [
        "/usr/lib/x86_64-linux-gnu",
        "/usr/lib64",
        "/usr/lib",
        "/usr/local/lib",
    ];
    let candidates = ["libcblas.so", "libopenblas.so", "libblas.so"];

    let mut found_cblas = false;
    for dir in lib_dirs {
        if Path::new(dir).join("libcblas.so").exists() {
            found_cblas = true;
            break;
        }
    }
    if !found_cblas {
        for dir in lib_dirs {
            for cand in &candidates[1..] {
                let src = Path::new(dir).join(cand);
                if src.exists() {
                    let dst = Path::new(&out_dir).join("libcblas.so");
                    let _ = std::fs::remove_file(&dst);
                    #[cfg(unix)]
                    std::os::unix::fs::symlink(&src, &dst).expect("symlink libcblas alias");
                    println!("cargo:rustc-link-search=native={out_dir}");
                    return;
                }
            }
        }
    }
}
