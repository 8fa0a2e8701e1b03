/** Error raised when the core CLI rejects a request. */
export class CoreError extends Error {
  /** Machine-readable error code taken verbatim from the core, e.g. "INVALID_PARAM". */
  readonly code: string;
  /** Process exit status of the failed CLI invocation, when one ran. */
  readonly exitCode: number | null;

  constructor(code: string, message: string, exitCode: number | null = null) {
    super(message);
    this.name = "CoreError";
    this.code = code;
    this.exitCode = exitCode;
  }
}

const STDERR_LINE = /^([A-Z][A-Z0-9_]*): (.*)$/;

/**
 * Turn a failed CLI invocation into a CoreError.
 *
 * The CLI reports failures as a single `CODE: message` stderr line; other
 * stderr content (warnings) may precede it, so the last matching line wins.
 */
export function errorFromStderr(stderr: string, exitCode: number | null): CoreError {
  const lines = stderr.split("\n").filter((l) => l.trim() !== "");
  for (let i = lines.length - 1; i >= 0; i--) {
    const m = STDERR_LINE.exec(lines[i] as string);
    if (m) {
      return new CoreError(m[1] as string, m[2] as string, exitCode);
    }
  }
  const tail = lines.length > 0 ? lines[lines.length - 1] : "no stderr output";
  return new CoreError("CLI_ERROR", `exit ${exitCode}: ${tail}`, exitCode);
}
