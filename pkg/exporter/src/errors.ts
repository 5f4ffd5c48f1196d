export class ExporterError extends Error {}

/** Crop plan dimensions do not match the image being cropped. */
export class PlanMismatch extends ExporterError {}

/** Image bytes could not be decoded. */
export class DecodeFailure extends ExporterError {}

/** Encoder produced no usable embedding. */
export class EncoderFailure extends ExporterError {}

/** No LLM endpoint reachable and no cached response on disk. */
export class EndpointUnavailable extends ExporterError {}

/** LLM response parsed to an empty attribute list. */
export class EmptyResponse extends ExporterError {}
