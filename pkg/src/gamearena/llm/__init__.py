"""Language-model policies and their chat transports."""

from gamearena.llm.agents import (
    LLMAgent,
    ReasoningConfig,
    cot_agent_act,
    prompt_agent_act,
    sc_cot_agent_act,
    tot_agent_act,
)
from gamearena.llm.client import (
    AuthenticationError,
    ChatParams,
    ChatTransportError,
    ContextOverflowError,
    HttpChatClient,
    RandomLegalClient,
    RecordingClient,
    ScriptedClient,
    chat_complete,
)

__all__ = [
    "AuthenticationError", "ChatParams", "ChatTransportError", "ContextOverflowError",
    "HttpChatClient", "LLMAgent", "RandomLegalClient", "ReasoningConfig", "RecordingClient",
    "ScriptedClient", "chat_complete", "cot_agent_act", "prompt_agent_act", "sc_cot_agent_act",
    "tot_agent_act",
]
