// Minimal ambient declarations for the WebExtension APIs this extension
// touches; keeps the build hermetic without a typings dependency.

interface ChromeEvent<T extends (...args: never[]) => void> {
  addListener(callback: T): void;
}

declare const chrome: {
  runtime: {
    onMessage: ChromeEvent<
      (
        message: unknown,
        sender: { tab?: { id?: number } },
        sendResponse: (response?: unknown) => void,
      ) => boolean | void
    >;
    sendMessage(message: unknown): Promise<unknown>;
    getURL(path: string): string;
    lastError?: { message?: string };
  };
  action: {
    setBadgeText(details: { tabId?: number; text: string }): Promise<void> | void;
    setBadgeBackgroundColor(details: { tabId?: number; color: string }): Promise<void> | void;
    setTitle(details: { tabId?: number; title: string }): Promise<void> | void;
  };
  storage: {
    sync: {
      get(defaults: Record<string, unknown>): Promise<Record<string, unknown>>;
      set(values: Record<string, unknown>): Promise<void>;
    };
  };
  tabs: {
    query(queryInfo: {
      active?: boolean;
      currentWindow?: boolean;
    }): Promise<Array<{ id?: number; url?: string }>>;
    sendMessage(tabId: number, message: unknown): Promise<unknown>;
    update(tabId: number, updateProperties: { url: string }): Promise<unknown> | void;
    onRemoved: ChromeEvent<(tabId: number) => void>;
  };
  webNavigation: {
    onCommitted: ChromeEvent<
      (details: {
        tabId: number;
        frameId: number;
        url: string;
        transitionQualifiers?: string[];
      }) => void
    >;
    onCompleted: ChromeEvent<
      (details: { tabId: number; frameId: number; url: string }) => void
    >;
  };
  webRequest: {
    onCompleted: {
      addListener(
        callback: (details: {
          tabId: number;
          url: string;
          type: string;
        }) => void,
        filter: { urls: string[] },
      ): void;
    };
  };
  notifications?: {
    create(options: {
      type: string;
      iconUrl?: string;
      title: string;
      message: string;
    }): void;
  };
};
