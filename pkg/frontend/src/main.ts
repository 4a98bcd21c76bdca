import { ApiClient } from './api.js';
import { initApp } from './app.js';

declare global {
  // runtime override for serving the UI away from the hub origin
  var ONTOHUB_API_BASE: string | undefined;
}

initApp(document, new ApiClient(globalThis.ONTOHUB_API_BASE ?? ''));
