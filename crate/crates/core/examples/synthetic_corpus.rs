//! Write the bundled synthetic RGB-D corpus as `<stem>.png` + `<stem>_depth.png`.
//!
//! `cargo run --example synthetic_corpus -- corpus/ 10`

use std::path::PathBuf;

use vfl::io::{save_rgbd, DEFAULT_DEPTH_SCALE};
use vfl::synthetic::{corpus, corpus_intrinsics};

fn main() -> vfl::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "corpus".into()));
    let count = args.next().and_then(|n| n.parse().ok()).unwrap_or(10);
    std::fs::create_dir_all(&dir).map_err(|source| vfl::Error::Write { path: dir.clone(), source })?;

    for (i, frame) in corpus(count, 0).iter().enumerate() {
        let stem = format!("frame{i:02}");
        save_rgbd(frame, &dir.join(format!("{stem}.png")), &dir.join(format!("{stem}_depth.png")), DEFAULT_DEPTH_SCALE)?;
    }
    let k = corpus_intrinsics();
    println!("wrote {count} frames ({}x{}, f = {}) to {}", k.width, k.height, k.f, dir.display());
    Ok(())
}
