//! The checked-in surface files under `prelude/` stay in sync with the
//! built-in parametrizations. Run with `REGEN_PRELUDE=1` to rewrite them.

use std::path::PathBuf;

use mutt_cli::{elab, parser, printer};
use mutt_core::convert::ConversionOptions;
use mutt_core::prelude;
use mutt_core::reduce::DEFAULT_FUEL;
use mutt_core::sig::Parametrization;
use mutt_core::syntax::{ConstantId, Term};

fn prelude_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../prelude")
        .join(name)
}

fn sync(name: &str, p: &Parametrization) {
    let path = prelude_path(name);
    let text = printer::parametrization(p);
    if std::env::var("REGEN_PRELUDE").is_ok() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
    }
    let on_disk = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {}", path.display(), e));
    let file = parser::parse(&on_disk).unwrap();
    let loaded =
        elab::elaborate(&file, &ConversionOptions::default(), DEFAULT_FUEL).unwrap();
    assert_eq!(&loaded.prm, p, "{} is out of date", path.display());
}

#[test]
fn base_file_is_current() {
    sync("base.mutt", &prelude::base());
}

#[test]
fn prop_file_is_current() {
    sync("prop.mutt", &prelude::prop_extension());
}

#[test]
fn exc_file_is_current() {
    sync("exc.mutt", &prelude::exc_extension());
}

#[test]
fn sprop_file_is_current() {
    sync("sprop.mutt", &prelude::sprop_extension());
}

#[test]
fn axiom_file_is_current() {
    let p = prelude::axiom_extension(
        &prelude::base(),
        "lem",
        "oracle",
        Term::inert(ConstantId::inert("Bool_lem"), vec![]),
        0,
    )
    .unwrap();
    sync("axiom.mutt", &p);
}
