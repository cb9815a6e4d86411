/**
 * Minimal DOM layer: character blocks the annotator drags or clicks,
 * reference tabs, and a live preview panel fed by the server.
 */

import { WorkbenchClient, ServiceError } from "./client.js";
import { Workbench, MAX_REFERENCE_TABS } from "./workbench.js";

export function mountWorkbench(
  root: HTMLElement,
  workbench: Workbench,
  annotator: string,
): void {
  root.innerHTML = "";
  const tabBar = document.createElement("div");
  const blockRow = document.createElement("div");
  const preview = document.createElement("pre");
  const error = document.createElement("div");
  error.className = "error";
  const submit = document.createElement("button");
  submit.textContent = "submit";
  root.append(tabBar, blockRow, preview, error, submit);

  const refresh = async () => {
    error.textContent = "";
    try {
      await workbench.refreshPreview();
      preview.textContent = workbench.previews.join("\n");
    } catch (exc) {
      error.textContent =
        exc instanceof ServiceError
          ? `${exc.detail.field_path}: ${exc.detail.message}`
          : String(exc);
    }
    render();
  };

  const render = () => {
    tabBar.innerHTML = "";
    workbench.tabs.forEach((_, index) => {
      const tab = document.createElement("button");
      tab.textContent = `ref ${index + 1}`;
      tab.disabled = index === workbench.activeTab;
      tab.onclick = () => {
        workbench.activeTab = index;
        render();
      };
      tabBar.append(tab);
    });
    if (workbench.tabs.length < MAX_REFERENCE_TABS) {
      const add = document.createElement("button");
      add.textContent = "+";
      add.onclick = () => {
        workbench.addTab();
        void refresh();
      };
      tabBar.append(add);
    }

    blockRow.innerHTML = "";
    const active = workbench.active;
    active.order.forEach((orig, slot) => {
      const block = document.createElement("span");
      block.textContent = workbench.source[orig] ?? "";
      block.draggable = true;
      block.className = active.deletes.has(orig) ? "block deleted" : "block";
      block.ondragstart = (event) =>
        event.dataTransfer?.setData("text/plain", String(slot));
      block.ondragover = (event) => event.preventDefault();
      block.ondrop = (event) => {
        event.preventDefault();
        const from = Number(event.dataTransfer?.getData("text/plain"));
        active.dragBlock(from, slot);
        void refresh();
      };
      block.onclick = () => {
        active.clickDelete(orig);
        void refresh();
      };
      blockRow.append(block);
    });
  };

  submit.onclick = async () => {
    error.textContent = "";
    try {
      const result = await workbench.submit(annotator);
      preview.textContent = result.preview.join("\n");
    } catch (exc) {
      error.textContent =
        exc instanceof ServiceError
          ? `${exc.detail.field_path}: ${exc.detail.message}`
          : String(exc);
    }
  };

  void refresh();
}

export async function startSession(
  root: HTMLElement,
  baseUrl: string,
  annotator: string,
): Promise<Workbench> {
  const client = new WorkbenchClient(baseUrl);
  const task = await client.nextTask(annotator);
  const workbench = new Workbench(task.id, task.sentence, client);
  mountWorkbench(root, workbench, annotator);
  return workbench;
}
