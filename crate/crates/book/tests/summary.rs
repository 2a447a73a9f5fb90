//! Every chapter listed in the book's table of contents must be compiled
//! into the doc-tests, and nothing else may be.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

fn book_src() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../book/src"))
}

fn chapters_in_summary() -> BTreeSet<String> {
    let summary = fs::read_to_string(book_src().join("SUMMARY.md")).unwrap();
    summary
        .lines()
        .filter_map(|l| l.split_once("](").map(|(_, rest)| rest))
        .filter_map(|rest| rest.split_once(')').map(|(file, _)| file.to_string()))
        .collect()
}

fn chapters_in_lib() -> BTreeSet<String> {
    let lib = include_str!("../src/lib.rs");
    lib.lines()
        .filter_map(|l| l.split_once("book/src/"))
        .filter_map(|(_, rest)| rest.split_once('"').map(|(file, _)| file.to_string()))
        .collect()
}

#[test]
fn every_chapter_is_doc_tested() {
    let summary = chapters_in_summary();
    assert!(!summary.is_empty());
    assert_eq!(summary, chapters_in_lib());
}

#[test]
fn every_markdown_file_is_in_the_summary() {
    let mut files = BTreeSet::new();
    for entry in fs::read_dir(book_src()).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        if name.ends_with(".md") && name != "SUMMARY.md" {
            files.insert(name);
        }
    }
    assert_eq!(files, chapters_in_summary());
}
