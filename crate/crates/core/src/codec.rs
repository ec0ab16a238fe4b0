//! Binary container shared by key and proof files.
//!
//! Layout (all integers big-endian):
//!
//! ```text
//! "ZKPC" | version: u16 | backend id: u16 len + utf8 | kind: u8 | body
//! ```
//!
//! The body is a sequence of element blobs (`u32` length + bytes) and
//! element lists (`u32` count followed by blobs), in the field order of the
//! type being encoded.

use thiserror::Error;

use crate::group::{Backend, BackendId, GroupElement, GroupError};

pub const MAGIC: &[u8; 4] = b"ZKPC";
pub const VERSION: u16 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("not a ZKPC container")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u16),
    #[error("expected a {expected:?} container, found kind byte {found}")]
    WrongKind { expected: ArtifactKind, found: u8 },
    #[error("container truncated")]
    Truncated,
    #[error("{0} trailing bytes after container body")]
    Trailing(usize),
    #[error("inconsistent shape: {0}")]
    Shape(String),
    #[error("json: {0}")]
    Json(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<serde_json::Error> for CodecError {
    fn from(e: serde_json::Error) -> Self {
        CodecError::Json(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ArtifactKind {
    ProvingKey = 1,
    VerificationKey = 2,
    Proof = 3,
}

pub struct ContainerWriter {
    buf: Vec<u8>,
}

impl ContainerWriter {
    pub fn new(kind: ArtifactKind, backend: Backend) -> Self {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_be_bytes());
        let id = backend.id().to_string();
        buf.extend_from_slice(&(id.len() as u16).to_be_bytes());
        buf.extend_from_slice(id.as_bytes());
        buf.push(kind as u8);
        ContainerWriter { buf }
    }

    pub fn element(&mut self, g: &GroupElement) -> &mut Self {
        let bytes = g.to_bytes();
        self.buf
            .extend_from_slice(&(bytes.len() as u32).to_be_bytes());
        self.buf.extend_from_slice(&bytes);
        self
    }

    pub fn elements(&mut self, gs: &[GroupElement]) -> &mut Self {
        self.buf.extend_from_slice(&(gs.len() as u32).to_be_bytes());
        for g in gs {
            self.element(g);
        }
        self
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

pub struct ContainerReader<'a> {
    data: &'a [u8],
    pos: usize,
    backend: Backend,
}

impl<'a> ContainerReader<'a> {
    pub fn open(data: &'a [u8], kind: ArtifactKind) -> Result<Self, CodecError> {
        if data.len() < 4 || &data[..4] != MAGIC {
            return Err(CodecError::BadMagic);
        }
        let mut r = ContainerReader {
            data,
            pos: 4,
            // placeholder until the header is parsed
            backend: Backend::simulated(Default::default()),
        };
        let version = u16::from_be_bytes(r.take(2)?.try_into().unwrap());
        if version != VERSION {
            return Err(CodecError::UnsupportedVersion(version));
        }
        let id_len = u16::from_be_bytes(r.take(2)?.try_into().unwrap()) as usize;
        let id = std::str::from_utf8(r.take(id_len)?)
            .map_err(|_| CodecError::Shape("backend id is not utf-8".into()))?;
        let id: BackendId = id.parse()?;
        r.backend = Backend::from_id(id)?;
        let found = r.take(1)?[0];
        if found != kind as u8 {
            return Err(CodecError::WrongKind {
                expected: kind,
                found,
            });
        }
        Ok(r)
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], CodecError> {
        let end = self.pos.checked_add(n).ok_or(CodecError::Truncated)?;
        if end > self.data.len() {
            return Err(CodecError::Truncated);
        }
        let out = &self.data[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<usize, CodecError> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()) as usize)
    }

    pub fn element(&mut self) -> Result<GroupElement, CodecError> {
        let len = self.u32()?;
        let blob = self.take(len)?;
        Ok(self.backend.element_from_bytes(blob)?)
    }

    pub fn elements(&mut self) -> Result<Vec<GroupElement>, CodecError> {
        let count = self.u32()?;
        // each blob is at least 4 bytes; refuse counts the data cannot hold
        if count > (self.data.len() - self.pos) / 4 {
            return Err(CodecError::Truncated);
        }
        (0..count).map(|_| self.element()).collect()
    }

    pub fn finish(self) -> Result<(), CodecError> {
        match self.data.len() - self.pos {
            0 => Ok(()),
            n => Err(CodecError::Trailing(n)),
        }
    }
}

pub(crate) fn hex_list(gs: &[GroupElement]) -> Vec<String> {
    gs.iter().map(GroupElement::to_tagged_hex).collect()
}

pub(crate) fn parse_list(
    backend: &Backend,
    list: &[String],
) -> Result<Vec<GroupElement>, CodecError> {
    list.iter()
        .map(|s| backend.parse_element(s).map_err(CodecError::from))
        .collect()
}
