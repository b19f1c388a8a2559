use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("{path}: input is not valid UTF-8 (byte offset {offset})")]
    InvalidUtf8 { path: PathBuf, offset: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// One Java source file held in memory, with a byte-offset index of line starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    path: PathBuf,
    content: String,
    line_index: Vec<usize>,
}

impl SourceFile {
    /// Builds a source file from text. A leading byte-order mark is dropped.
    pub fn new(path: impl Into<PathBuf>, content: impl Into<String>) -> Self {
        let mut content = content.into();
        if content.starts_with('\u{feff}') {
            content.drain(..'\u{feff}'.len_utf8());
        }
        let line_index = compute_line_index(&content);
        Self {
            path: path.into(),
            content,
            line_index,
        }
    }

    pub fn from_bytes(path: impl Into<PathBuf>, bytes: Vec<u8>) -> Result<Self, SourceError> {
        let path = path.into();
        match String::from_utf8(bytes) {
            Ok(text) => Ok(Self::new(path, text)),
            Err(err) => Err(SourceError::InvalidUtf8 {
                offset: err.utf8_error().valid_up_to(),
                path,
            }),
        }
    }

    pub fn read(path: &Path) -> Result<Self, SourceError> {
        let bytes = std::fs::read(path).map_err(|source| SourceError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_bytes(path, bytes)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn content(&self) -> &str {
        &self.content
    }

    /// Byte offsets of the first character of every line; always starts with 0.
    pub fn line_index(&self) -> &[usize] {
        &self.line_index
    }

    /// Number of physical lines. An empty file has none; a trailing newline
    /// does not open a new line.
    pub fn physical_lines(&self) -> usize {
        if self.content.is_empty() {
            return 0;
        }
        let n = self.line_index.len();
        if self.content.ends_with('\n') {
            n - 1
        } else {
            n
        }
    }

    /// 1-based (line, column) of a byte offset. Columns count characters; an
    /// offset inside a multi-byte character maps to that character.
    pub fn line_col(&self, offset: usize) -> (u32, u32) {
        let mut offset = offset.min(self.content.len());
        while !self.content.is_char_boundary(offset) {
            offset -= 1;
        }
        let line = match self.line_index.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let start = self.line_index[line];
        let col = self.content[start..offset].chars().count();
        (line as u32 + 1, col as u32 + 1)
    }
}

fn compute_line_index(content: &str) -> Vec<usize> {
    let bytes = content.as_bytes();
    let mut index = vec![0];
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'\n' => index.push(i + 1),
            b'\r' => {
                if bytes.get(i + 1) == Some(&b'\n') {
                    i += 1;
                }
                index.push(i + 1);
            }
            _ => {}
        }
        i += 1;
    }
    index
}
