/**
 * The example buffers the editor opens with: a committee protocol and a
 * claimed refinement of it, whose three compliance errors are visible
 * immediately.
 */

export const SEED_SPEC_NAME = "conf.sys";
export const SEED_IMPL_NAME = "conf_prime.sys";
export const SEED_FOCUS = "conf'";

export const SEED_SPEC = `// A programme committee handling one submission; the author is undefined.
system conf

obj PC
author?submit(doc)
author!{
   reject(string).
   conditionalAccept(string)
      behaviour Loop
         author?submit(doc)
         author!{
            reject(string).
            revise(string)
               Loop
            accept
               author!artifactReq
               author?{
                  decline.
                  provide(URL).
               }
         }
      Loop
}
`;

export const SEED_IMPL = `// A claimed implementation of conf.
system conf': conf

obj PC
author?submit(doc)
author!{
   accept.
   reject(string).
   conditionalAccept(string)
      behaviour Loop
         author?{
            submit(doc)
               author!{
                  reject(string).
                  revise(string)
                     Loop
                  accept
                     author!artifactReq
                     author?{
                        provide(URL)
                           artifact!{
                              certify.
                              noCertify.
                           }
                     }
               }
         }
      Loop
}
`;
