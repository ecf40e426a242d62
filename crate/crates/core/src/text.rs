//! Tokenizer shared by documents and query logs.

use alloc::string::String;
use alloc::vec::Vec;

/// Lowercases and splits on anything that is not alphanumeric. No stemming.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}
