use std::path::PathBuf;
use std::process::Command;

use hypersum::catalog::Catalog;
use hypersum::run;

const BAUER: &str = "(4k+1)*binom(2k,k)^3/(-64)^k";
const KERNEL: &str = "binom(2k,k)^3/(-64)^k";

fn hs(args: &[&str]) -> (i32, String) {
    run(std::iter::once("hypersum").chain(args.iter().copied()))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hypersum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn bounds_of_degenerate_example() {
    let (code, out) = hs(&["bounds", "binom(2k,k)^4/((2k-1)^4*256^k)"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("d: 3\n") && out.contains("B: 4\n") && out.contains("degenerated: true"),
        "{out}"
    );
    let (_, js) = hs(&["bounds", "binom(2k,k)^4/((2k-1)^4*256^k)", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&js).unwrap();
    assert_eq!(v["d"], 3);
    assert_eq!(v["upper_b"], 4);
    assert_eq!(v["minimal_multiplier"], "4*k - 1");
}

#[test]
fn repr_and_summable() {
    let (code, out) = hs(&["repr", BAUER, "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["c"], "k + 1/4");
    assert_eq!(v["a"], "-k^3 - 3/2*k^2 - 3/4*k - 1/8");
    assert_eq!(v["b"], "k^3 + 3*k^2 + 3*k + 1");

    let (code, out) = hs(&["summable", "k * fact(k)"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("summable: yes"), "{out}");
    let (_, out) = hs(&["summable", "1/(k+1)"]);
    assert_eq!(out, "summable: no\n");
}

#[test]
fn forge_bauer_family_and_verify_catalog() {
    let path = scratch("bauer.json");
    let p = path.to_str().unwrap();
    let (code, out) = hs(&["forge", BAUER, "--sum", "2/pi", "--maxdeg", "3", "--out", p]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("identities: 5\n"));
    assert_eq!(out.matches("telescoping: pass  numeric: pass").count(), 5);

    let cat = Catalog::load(&path).unwrap();
    assert_eq!(cat.entries.len(), 6);
    let (code, out) = hs(&["verify", p]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("6 entries, all verified\n"));

    let tampered = std::fs::read_to_string(&path).unwrap().replacen(
        "\"base_coeff\": \"-4\"",
        "\"base_coeff\": \"-3\"",
        1,
    );
    let bad = scratch("bauer-bad.json");
    std::fs::write(&bad, tampered).unwrap();
    let cat = Catalog::load(&bad).unwrap();
    assert_eq!(cat.entries.iter().filter(|e| e.flagged).count(), 1);
    let (code, out) = hs(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn forge_single_candidate() {
    let (code, out) = hs(&["forge", BAUER, "--sum", "2/pi", "--q", "(2k-1)^2", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let id = &v["identities"][0];
    assert_eq!(id["rhs"], "-1/pi");
    assert_eq!(
        id["latex"],
        "\\sum_{k=0}^\\infty \\frac{k(4k-1)\\binom{2k}{k}^3}{(2k-1)^2(-64)^k} = -\\frac{1}{\\pi}"
    );
}

#[test]
fn forge_zeilberger_start_two() {
    let (code, out) = hs(&[
        "forge",
        "(21k-8)/(k^3*binom(2k,k)^3)",
        "--start",
        "1",
        "--sum",
        "pi^2/6",
        "--q",
        "(k-1)^2",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\\sum_{k=2}^\\infty"), "{out}");
    assert!(out.contains("= -pi^2/16 + 5/8"), "{out}");
}

#[test]
fn forge_rejects_divergent_series() {
    let (code, out) = hs(&["forge", "1/(k+1)", "--sum", "1"]);
    assert_eq!(code, 2);
    assert!(out.contains("does not converge"), "{out}");
}

#[test]
fn congruences() {
    let cases = [
        ("4k+1", "p*L", "5..97"),
        ("(8k^2-2k)/(2k-1)^2", "-p*L + p*8^(p-1)", "3..97"),
        ("(4k+3)(2k+1)/(4(k+1)^2)", "p*L", "5..97"),
        ("(4k+1)/(2(k+1)(2k-1))", "p^2 - p*L", "5..97"),
    ];
    for (m, t, r) in cases {
        let (code, out) = hs(&[
            "congruence",
            KERNEL,
            "--multiplier",
            m,
            "--target",
            t,
            "--primes",
            r,
            "--power",
            "3",
        ]);
        assert_eq!(code, 0, "{m}: {out}");
    }
    let (code, out) = hs(&["congruence", BAUER, "--target", "p*L", "--primes", "5..97"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("23 of 23 primes in 5..97 pass\n"));
    let (code, out) = hs(&[
        "congruence",
        KERNEL,
        "--multiplier",
        "4k+1",
        "--target",
        "2*p",
        "--primes",
        "5..13",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("0 of 4 primes"), "{out}");
}

#[test]
fn usage_errors_exit_two() {
    let (code, out) = hs(&["repr", "binom(2k"]);
    assert_eq!(code, 2);
    assert!(out.contains("term grammar"));
    assert_eq!(hs(&["frobnicate"]).0, 2);
    assert_eq!(hs(&["forge", BAUER, "--sum", "2/e"]).0, 2);
    assert_eq!(hs(&["congruence", KERNEL, "--target", "p*Q"]).0, 2);
    assert_eq!(
        hs(&["congruence", KERNEL, "--target", "p", "--primes", "24..28"]).0,
        2
    );
    assert_eq!(hs(&["verify", "/nonexistent/catalog.json"]).0, 2);
    assert_eq!(hs(&["--help"]).0, 0);
}

#[test]
fn reports_are_deterministic() {
    let args = ["forge", BAUER, "--sum", "2/pi", "--json"];
    assert_eq!(hs(&args), hs(&args));
}

#[test]
fn binary_exit_status() {
    let out = Command::new(env!("CARGO_BIN_EXE_hypersum"))
        .args(["bounds", "binom(2k,k)^4/((2k-1)^4*256^k)"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("B: 4"));
    let out = Command::new(env!("CARGO_BIN_EXE_hypersum"))
        .args(["repr", "k^"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn negative_leading_arguments() {
    let (code, out) = hs(&[
        "forge",
        "binom(2k,k)^3/(-64)^k",
        "--sum",
        "-1/pi",
        "--q",
        "1",
        "--maxdeg",
        "1",
    ]);
    assert_eq!(code, 1, "{out}");
    assert!(out.starts_with("no identity"), "{out}");
}
