use std::time::Duration;

use ontoforge::elicit::{ElicitError, Endpoint};

pub const URL_VAR: &str = "ELICIT_URL";
pub const AUTH_VAR: &str = "ELICIT_AUTH";

/// Plain-text completion service: the prompt is POSTed as the request body
/// and the response body is the completion.
pub struct HttpEndpoint {
    url: String,
    auth: Option<String>,
    agent: ureq::Agent,
}

impl HttpEndpoint {
    /// Reads the endpoint from the environment; `None` when no URL is set.
    pub fn from_env() -> Option<Self> {
        let url = std::env::var(URL_VAR)
            .ok()
            .filter(|u| !u.trim().is_empty())?;
        let auth = std::env::var(AUTH_VAR).ok().filter(|a| !a.is_empty());
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(300)))
            .build()
            .into();
        Some(HttpEndpoint { url, auth, agent })
    }
}

impl Endpoint for HttpEndpoint {
    fn label(&self) -> String {
        self.url.clone()
    }

    fn complete(&self, prompt: &str) -> Result<String, ElicitError> {
        let mut req = self
            .agent
            .post(&self.url)
            .header("Content-Type", "text/plain; charset=utf-8");
        if let Some(auth) = &self.auth {
            req = req.header("Authorization", auth);
        }
        let mut resp = req
            .send(prompt)
            .map_err(|e| ElicitError::Endpoint(e.to_string()))?;
        resp.body_mut()
            .read_to_string()
            .map_err(|e| ElicitError::Endpoint(e.to_string()))
    }
}
