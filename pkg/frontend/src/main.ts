/** Browser entry point: mounts the annotation app on #app.
 *
 * The campaign to annotate is picked with ?campaign=<id> in the URL. The
 * annotator id lives in localStorage so reloading the page resumes the
 * same seat instead of claiming a fresh one.
 */

import { ServiceClient } from "./api.js";
import { AnnotationApp } from "./ui.js";

function mount(): void {
  const root = document.getElementById("app");
  if (root === null) {
    throw new Error("missing #app element");
  }
  const campaignId = new URLSearchParams(window.location.search).get(
    "campaign",
  );
  if (!campaignId) {
    root.textContent =
      "Ajoutez ?campaign=<id> à l'adresse pour choisir une campagne.";
    return;
  }
  const app = new AnnotationApp({
    root,
    client: new ServiceClient(""),
    campaignId,
    storage: window.localStorage,
  });
  void app.start();
}

mount();
