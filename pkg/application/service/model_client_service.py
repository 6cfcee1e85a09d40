"""
OpenAI 兼容推理端点客户端
- build_prompt: 构造单条 user 消息（图片在前，题干+选项+模板在后）
- extract_answer: 从回答文本中提取选项字母 g(·)
- ModelClient.query: 带并发上限、指数退避重试的异步请求
"""
import asyncio
import re
import time
from typing import Any, Dict, List, Optional, Sequence

import httpx
import numpy as np
from pydantic import BaseModel

from application.common.config import EndpointConfig, GenerationParams
from application.common.constants import PromptModeEnum
from application.common.exception import (
    EvalBusinessException,
    HttpStatusError,
    RequestTimeout,
    RetriesExhausted,
    TransportError,
)
from application.common.schema import Sample
from application.common.utils import ImageUtils
from application.common.utils.ValidationUtils import ValidationUtils
from application.core.logger_util import logger

DIRECT_TEMPLATE = (
    "Please select the correct answer from the options above. "
    "Respond with only the letter of the correct option. Do not explain. Answer:"
)
COT_TEMPLATE = (
    "Answer the preceding multiple choice question. The last line of your response should be of the "
    "following format: 'Answer: $LETTER' (without quotes) where LETTER is one of options. "
    "Think step by step before answering."
)
TEMPLATES = {
    PromptModeEnum.DIRECT: DIRECT_TEMPLATE,
    PromptModeEnum.COT: COT_TEMPLATE,
}

# 单个字母，两侧为非字母数字或字符串边界
STANDALONE_LETTER = re.compile(r"(?<![A-Za-z0-9])([A-Za-z])(?![A-Za-z0-9])")
COT_ANSWER = re.compile(r"answer\s*:\s*\**\s*\(?\s*([A-Za-z])(?![A-Za-z0-9])", re.IGNORECASE)

RETRYABLE_STATUS = {408, 409, 429}


class QueryResult(BaseModel):
    raw_text: str
    latency: float
    token_usage: Optional[Dict[str, int]] = None


# ============================
#        提示词
# ============================

def prompt_text(sample: Sample, mode: PromptModeEnum) -> str:
    lines = [sample.question]
    lines.extend(f"{o.letter}. {o.text}" for o in sample.options)
    lines.append(TEMPLATES[PromptModeEnum(mode)])
    return "\n".join(lines)


def build_prompt(
        sample: Sample,
        mode: PromptModeEnum,
        include_image: bool = True,
        images: Optional[Sequence[np.ndarray]] = None
) -> Dict[str, Any]:
    """
    :param sample: 样本
    :param mode: direct / cot
    :param include_image: False 时为 no-image 基线
    :param images: 已解码（可能已腐蚀）的图片；为空时从样本路径读取
    :return: {"messages": [...]}，图片以 PNG base64 内联
    """
    content: List[Dict[str, Any]] = []
    if include_image:
        if images is None:
            images = [ImageUtils.load_image(p) for p in sample.images]
        for image in images:
            content.append({"type": "image_url", "image_url": {"url": ImageUtils.png_data_url(image)}})
    content.append({"type": "text", "text": prompt_text(sample, mode)})
    return {"messages": [{"role": "user", "content": content}]}


def generation_fields(params: GenerationParams) -> Dict[str, Any]:
    """生成参数映射到 chat-completions 请求字段；确定性模式发送 temperature=0"""
    fields: Dict[str, Any] = {"max_tokens": params.max_new_tokens}
    if params.deterministic:
        fields["temperature"] = 0
    else:
        for name in ("temperature", "top_p", "top_k"):
            value = getattr(params, name)
            if value is not None:
                fields[name] = value
    if params.seed is not None:
        fields["seed"] = params.seed
    return fields


# ============================
#        答案提取
# ============================

def _first_standalone(text: str, valid: set) -> Optional[str]:
    # 先找大写字母，找不到再放宽到小写，避免英文冠词 "a" 抢先
    for match in STANDALONE_LETTER.finditer(text):
        if match.group(1) in valid:
            return match.group(1)
    for match in STANDALONE_LETTER.finditer(text):
        letter = match.group(1).upper()
        if letter in valid:
            return letter
    return None


def extract_answer(text: Optional[str], mode: PromptModeEnum, valid_letters: Sequence[str]) -> Optional[str]:
    """
    Direct: 从头扫描的第一个独立有效字母
    CoT: 从尾部找最后一个 "Answer: X"，找不到时退回第一个独立有效字母
    返回 None 表示无法解析
    """
    valid = set(ValidationUtils.validate_letters(valid_letters))
    if not text:
        return None
    if PromptModeEnum(mode) == PromptModeEnum.COT:
        for match in reversed(list(COT_ANSWER.finditer(text))):
            letter = match.group(1).upper()
            if letter in valid:
                return letter
    return _first_standalone(text, valid)


def _message_text(payload: Dict[str, Any]) -> str:
    choices = payload.get("choices") or []
    if not isinstance(choices, list) or not choices or not isinstance(choices[0], dict):
        return ""
    message = choices[0].get("message")
    content = message.get("content") if isinstance(message, dict) else None
    if content is None:
        return ""
    if isinstance(content, list):
        return "".join(part.get("text", "") for part in content if isinstance(part, dict))
    return str(content)


# ============================
#        客户端
# ============================

class ModelClient:
    """
    推理端点客户端，可在多个 worker 间共享
    transport 可注入（测试中使用 httpx.MockTransport）
    """

    def __init__(
            self,
            endpoint: EndpointConfig,
            model_name: str,
            transport: Optional[httpx.AsyncBaseTransport] = None
    ):
        self.endpoint = endpoint
        self.model_name = endpoint.model_name or model_name
        self._semaphore = asyncio.Semaphore(endpoint.max_concurrent)
        headers = {"Content-Type": "application/json"}
        api_key = endpoint.api_key()
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        self._client = httpx.AsyncClient(
            base_url=endpoint.base_url.rstrip("/"),
            headers=headers,
            timeout=endpoint.timeout,
            transport=transport,
        )

    async def __aenter__(self) -> "ModelClient":
        return self

    async def __aexit__(self, *exc) -> None:
        await self.close()

    async def close(self) -> None:
        await self._client.aclose()

    def request_body(self, prompt: Dict[str, Any], params: GenerationParams) -> Dict[str, Any]:
        return {"model": self.model_name, **prompt, **generation_fields(params)}

    async def query(self, prompt: Dict[str, Any], params: GenerationParams) -> QueryResult:
        """
        :raises TransportError / RequestTimeout / HttpStatusError: max_retries = 0 时原样抛出
        :raises RetriesExhausted: 重试耗尽
        :raises HttpStatusError: 不可重试的 4xx 立即抛出
        """
        body = self.request_body(prompt, params)
        attempts = self.endpoint.max_retries + 1
        last_error: Optional[EvalBusinessException] = None

        for attempt in range(attempts):
            if attempt > 0:
                delay = self.endpoint.backoff_base * (2 ** (attempt - 1))
                logger.warning(f"⚠️ 第 {attempt} 次重试，{delay:.1f}s 后发送: {last_error.message}")
                if delay > 0:
                    await asyncio.sleep(delay)
            try:
                return await self._send(body)
            except (TransportError, RequestTimeout) as e:
                last_error = e
            except HttpStatusError as e:
                if e.status < 500 and e.status not in RETRYABLE_STATUS:
                    raise
                last_error = e

        if attempts == 1:
            raise last_error
        raise RetriesExhausted(attempts, last_error)

    async def _send(self, body: Dict[str, Any]) -> QueryResult:
        async with self._semaphore:
            started = time.perf_counter()
            try:
                response = await self._client.post("/chat/completions", json=body)
            except httpx.TimeoutException as e:
                raise RequestTimeout(message=f"推理请求超时: {e}") from e
            except httpx.TransportError as e:
                raise TransportError(message=f"推理端点连接失败: {e}") from e
            latency = time.perf_counter() - started

        if response.status_code >= 400:
            raise HttpStatusError(response.status_code, response.text)
        try:
            payload = response.json()
        except ValueError as e:
            raise TransportError(message=f"推理端点返回了非 JSON 响应: {e}") from e
        if not isinstance(payload, dict):
            raise TransportError(message=f"推理端点返回的 JSON 不是对象: {type(payload).__name__}")
        usage = payload.get("usage")
        token_usage = {k: int(v) for k, v in usage.items() if isinstance(v, (int, float))} if isinstance(usage, dict) else None
        return QueryResult(raw_text=_message_text(payload), latency=latency, token_usage=token_usage)


__all__ = [
    "DIRECT_TEMPLATE",
    "COT_TEMPLATE",
    "QueryResult",
    "ModelClient",
    "build_prompt",
    "prompt_text",
    "generation_fields",
    "extract_answer",
]
