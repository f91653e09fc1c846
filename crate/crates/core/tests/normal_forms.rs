use std::path::PathBuf;
use std::time::Instant;

use utk_core::corpus::{check_sources, read_manifest};
use utk_core::kernel::{check, convertible, normalize_at};
use utk_core::syntax::{validate, Context};

#[test]
fn corpus_bodies_normalize_stably() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let files = read_manifest(&dir).unwrap();
    let (scope, report) = check_sources(files.iter().map(|(f, s)| (f.as_str(), s.as_str())));
    assert!(report.pass);
    let ctx = Context::new();
    for (name, entry) in scope.entries() {
        let Some(body) = &entry.body_term else { continue };
        let t = Instant::now();
        let nf = normalize_at(&scope, &ctx, body, &entry.ty_term).unwrap();
        eprintln!("{name}: size {} -> {} in {:?}", body.size(), nf.size(), t.elapsed());
        assert!(validate(&nf, 0), "{name}");
        check(&scope, &ctx, &nf, &entry.ty_term).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(normalize_at(&scope, &ctx, &nf, &entry.ty_term).unwrap(), nf, "{name}");
        assert!(convertible(&scope, &ctx, body, &nf, &entry.ty_term).unwrap(), "{name}");
    }
}
