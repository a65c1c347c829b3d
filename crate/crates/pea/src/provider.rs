//! Sources of candidate programs: a chat-completion HTTP endpoint, or a
//! scripted list of canned responses.

use std::collections::VecDeque;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProviderError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("scripted provider has no responses left")]
    Exhausted,
    #[error("provider configuration: {0}")]
    Config(String),
}

/// Turns a prompt into a completion.
pub trait Provider {
    fn complete(&mut self, prompt: &str) -> Result<String, ProviderError>;
}

/// Replays canned responses in order. Scripted errors surface as
/// transport errors.
#[derive(Clone, Debug, Default)]
pub struct ScriptedProvider {
    responses: VecDeque<Result<String, String>>,
    prompts: Vec<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScriptItem {
    Text(String),
    Error { error: String },
}

impl ScriptedProvider {
    pub fn new<I: IntoIterator<Item = Result<String, String>>>(responses: I) -> Self {
        ScriptedProvider {
            responses: responses.into_iter().collect(),
            prompts: Vec::new(),
        }
    }

    /// A JSON array whose items are response strings or `{"error": "..."}`.
    pub fn from_json(text: &str) -> Result<Self, ProviderError> {
        let items: Vec<ScriptItem> =
            serde_json::from_str(text).map_err(|e| ProviderError::Config(format!("stub script: {e}")))?;
        Ok(Self::new(items.into_iter().map(|i| match i {
            ScriptItem::Text(s) => Ok(s),
            ScriptItem::Error { error } => Err(error),
        })))
    }

    pub fn from_file(path: &Path) -> Result<Self, ProviderError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ProviderError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Prompts received so far.
    pub fn prompts(&self) -> &[String] {
        &self.prompts
    }

    pub fn remaining(&self) -> usize {
        self.responses.len()
    }
}

impl Provider for ScriptedProvider {
    fn complete(&mut self, prompt: &str) -> Result<String, ProviderError> {
        self.prompts.push(prompt.to_string());
        match self.responses.pop_front() {
            Some(Ok(s)) => Ok(s),
            Some(Err(e)) => Err(ProviderError::Transport(e)),
            None => Err(ProviderError::Exhausted),
        }
    }
}

/// Settings for an OpenAI-style chat-completions endpoint, read from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HttpConfig {
    pub endpoint: String,
    pub model: String,
    /// Environment variable holding the API key.
    #[serde(default = "default_key_env")]
    pub api_key_env: String,
    /// Key used when the environment variable is unset.
    #[serde(default)]
    pub api_key: Option<String>,
    #[serde(default)]
    pub temperature: Option<f64>,
    #[serde(default = "default_timeout")]
    pub timeout_seconds: u64,
}

fn default_key_env() -> String {
    "PEA_API_KEY".into()
}

fn default_timeout() -> u64 {
    300
}

impl HttpConfig {
    pub fn from_toml(text: &str) -> Result<Self, ProviderError> {
        toml::from_str(text).map_err(|e| ProviderError::Config(e.to_string()))
    }

    /// The environment variable wins over the file.
    pub fn resolve_key(&self) -> Option<String> {
        std::env::var(&self.api_key_env)
            .ok()
            .filter(|k| !k.is_empty())
            .or_else(|| self.api_key.clone())
    }
}

pub struct HttpProvider {
    config: HttpConfig,
    key: Option<String>,
    agent: ureq::Agent,
}

impl HttpProvider {
    pub fn new(config: HttpConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(config.timeout_seconds)))
            .http_status_as_error(false)
            .build()
            .into();
        HttpProvider {
            key: config.resolve_key(),
            config,
            agent,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, ProviderError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ProviderError::Config(format!("{}: {e}", path.display())))?;
        Ok(Self::new(HttpConfig::from_toml(&text)?))
    }

    fn body(&self, prompt: &str) -> Value {
        let mut body = json!({
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
        });
        if let Some(t) = self.config.temperature {
            body["temperature"] = json!(t);
        }
        body
    }
}

/// The first choice's message text of a chat-completions response.
pub fn completion_text(response: &Value) -> Result<String, ProviderError> {
    if let Some(err) = response.get("error") {
        let msg = err.get("message").and_then(Value::as_str).map(String::from);
        return Err(ProviderError::Transport(msg.unwrap_or_else(|| err.to_string())));
    }
    response
        .pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(String::from)
        .ok_or_else(|| ProviderError::Transport("response has no message content".into()))
}

impl Provider for HttpProvider {
    fn complete(&mut self, prompt: &str) -> Result<String, ProviderError> {
        let mut request = self.agent.post(&self.config.endpoint);
        if let Some(key) = &self.key {
            request = request.header("Authorization", format!("Bearer {key}"));
        }
        let mut response = request
            .send_json(self.body(prompt))
            .map_err(|e| ProviderError::Transport(e.to_string()))?;
        let status = response.status();
        let text = response
            .body_mut()
            .read_to_string()
            .map_err(|e| ProviderError::Transport(e.to_string()))?;
        let value: Value = serde_json::from_str(&text).map_err(|_| {
            ProviderError::Transport(format!("HTTP {status}: {}", text.chars().take(200).collect::<String>()))
        })?;
        if !status.is_success() && value.get("error").is_none() {
            return Err(ProviderError::Transport(format!("HTTP {status}")));
        }
        completion_text(&value)
    }
}
