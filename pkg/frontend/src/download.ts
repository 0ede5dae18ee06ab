export type DownloadFn = (blob: Blob, filename: string) => void;

/** Trigger a browser download via a transient anchor element. */
export const triggerDownload: DownloadFn = (blob, filename) => {
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = filename;
  document.body.appendChild(link);
  link.click();
  document.body.removeChild(link);
  URL.revokeObjectURL(url);
};
